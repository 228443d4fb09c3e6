#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include "superfid/samplers.hpp"

namespace superfid {

namespace {

std::vector<double> dirichlet(int n, double alpha, RngStream& rng) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& v : x) {
        v = gamma(rng.engine());
        sum += v;
    }
    for (double& v : x) v /= sum;
    return x;
}

double safe_log_ratio(const std::vector<double>& x) {
    try {
        return log_density_ratio_g_bures(x);
    } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

struct Probe {
    double log_ratio;
    std::vector<double> point;
};

// Stochastic hill-climbing restricted to the simplex.
Probe polish(Probe start, RngStream& rng) {
    const int n = static_cast<int>(start.point.size());
    double step = 0.05;
    std::vector<double> cand(start.point.size());
    for (int it = 0; it < 20000 && step > 1e-13; ++it) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            cand[i] = rng.normal();
            mean += cand[i];
        }
        mean /= n;
        bool inside = true;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            cand[i] = start.point[i] + step * (cand[i] - mean);
            if (cand[i] < 0.0) inside = false;
            sum += cand[i];
        }
        if (!inside) {
            step *= 0.9;
            continue;
        }
        for (double& v : cand) v /= sum;
        const double lr = safe_log_ratio(cand);
        if (lr > start.log_ratio) {
            start.log_ratio = lr;
            start.point = cand;
            step = std::min(step * 1.5, 0.1);
        } else {
            step *= 0.95;
        }
    }
    return start;
}

}  // namespace

EnvelopeAudit audit_density_ratio_envelope(int n, std::uint64_t probes, std::uint64_t seed) {
    EnvelopeAudit audit;
    audit.dim = n;
    audit.bound = sup_density_ratio_unnormalized(n);
    audit.probes = probes;

    RngStream rng(seed, static_cast<std::uint64_t>(n));
    constexpr std::size_t kKeep = 8;
    std::vector<Probe> best;
    for (std::uint64_t p = 0; p < probes; ++p) {
        // Mix uniform, boundary-heavy and center-heavy probes.
        const double alpha = (p % 4 == 1) ? 0.3 : (p % 4 == 3) ? 5.0 : 1.0;
        Probe probe{0.0, dirichlet(n, alpha, rng)};
        probe.log_ratio = safe_log_ratio(probe.point);
        if (best.size() < kKeep || probe.log_ratio > best.back().log_ratio) {
            best.push_back(std::move(probe));
            std::sort(best.begin(), best.end(),
                      [](const Probe& a, const Probe& b) { return a.log_ratio > b.log_ratio; });
            if (best.size() > kKeep) best.pop_back();
        }
    }
    Probe top{-std::numeric_limits<double>::infinity(), {}};
    for (const Probe& b : best) {
        Probe polished = polish(b, rng);
        if (polished.log_ratio > top.log_ratio) top = std::move(polished);
    }
    audit.max_observed = std::exp(top.log_ratio);
    audit.argmax = top.point;
    audit.verified = audit.max_observed <= audit.bound * (1.0 + 1e-9);
    return audit;
}

const EnvelopeAudit& verified_envelope(int n) {
    static std::mutex mutex;
    static std::map<int, EnvelopeAudit> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, audit_density_ratio_envelope(n)).first;
    }
    if (!it->second.verified) {
        throw EnvelopeAuditFailure("density-ratio envelope for N=" + std::to_string(n) +
                                   " exceeded its closed-form supremum");
    }
    return it->second;
}

}  // namespace superfid
