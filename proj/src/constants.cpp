#include "superfid/constants.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/constants/constants.hpp>

#include "superfid/quadrature.hpp"
#include "superfid/statlab.hpp"

namespace superfid {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kPureCutoff = 1e-14;

void require_dim(int n, const char* what) {
    if (n < 2) throw InvalidDimension(std::string(what) + ": N must be at least 2");
}

NormalizationEstimate make(MeasureKind measure, int n, double value, NormalizationMethod method,
                           std::uint64_t terms = 0) {
    NormalizationEstimate e;
    e.measure = measure;
    e.dim = n;
    e.value = value;
    e.method = method;
    e.terms_or_samples = terms;
    return e;
}

}  // namespace

std::string_view method_tag(NormalizationMethod m) {
    switch (m) {
        case NormalizationMethod::Exact: return "exact";
        case NormalizationMethod::JensenUpperBound: return "jensen";
        case NormalizationMethod::Series: return "series";
        case NormalizationMethod::MonteCarlo: return "mc";
        case NormalizationMethod::Quadrature: return "quadrature";
    }
    return "?";
}

NormalizationEstimate c_hs(int n) {
    require_dim(n, "c_hs");
    double value;
    if (n * n <= 170) {
        double den = 1.0;
        for (int k = 1; k <= n; ++k) den *= std::tgamma(k) * std::tgamma(k + 1.0);
        value = std::tgamma(static_cast<double>(n) * n) / den;
    } else {
        double log_v = std::lgamma(static_cast<double>(n) * n);
        for (int k = 1; k <= n; ++k) log_v -= std::lgamma(k) + std::lgamma(k + 1.0);
        value = std::exp(log_v);
    }
    return make(MeasureKind::HilbertSchmidt, n, value, NormalizationMethod::Exact);
}

NormalizationEstimate c_g_exact(int n) {
    const double root2 = std::sqrt(2.0);
    if (n == 2) {
        return make(MeasureKind::SuperfidelityG, 2, 2.0 * root2 / (3.0 * kPi) * c_hs(2).value,
                    NormalizationMethod::Exact);
    }
    if (n == 3) {
        return make(MeasureKind::SuperfidelityG, 3, 432.0 * root2 / (317.0 * kPi) * c_hs(3).value,
                    NormalizationMethod::Exact);
    }
    throw UnsupportedDimension("c_g_exact: closed form known only for N = 2, 3");
}

NormalizationEstimate c_g_jensen_bound(int n) {
    require_dim(n, "c_g_jensen_bound");
    const double n2 = static_cast<double>(n) * n;
    return make(MeasureKind::SuperfidelityG, n,
                c_hs(n).value * std::sqrt(1.0 - 2.0 * n / (n2 + 1.0)),
                NormalizationMethod::JensenUpperBound);
}

NormalizationEstimate c_quadrature(MeasureKind measure, int n, double tolerance) {
    if (n != 2 && n != 3) throw UnsupportedDimension("c_quadrature: only N = 2, 3");
    const QuadratureResult q = simplex_quadrature(
        [measure](std::span<const double> l) { return density_unnormalized(measure, l); }, n,
        tolerance);
    return make(measure, n, 1.0 / q.value, NormalizationMethod::Quadrature);
}

NormalizationEstimate c_g_quadrature(int n, double tolerance) {
    return c_quadrature(MeasureKind::SuperfidelityG, n, tolerance);
}

const NormalizationEstimate& c_bures_quadrature(int n) {
    static std::mutex mutex;
    static std::map<int, NormalizationEstimate> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, c_quadrature(MeasureKind::Bures, n)).first;
    return it->second;
}

MonteCarloConstant c_g_monte_carlo(int n, std::uint64_t samples, const ShardPlan& plan) {
    require_dim(n, "c_g_monte_carlo");
    if (samples < 1000) throw DomainError("c_g_monte_carlo: need at least 1000 samples");
    const std::vector<double> p = hs_purities(n, samples, plan);
    std::vector<double> w;
    w.reserve(p.size());
    std::uint64_t discarded = 0;
    for (double x : p) {
        if (x >= 1.0 - kPureCutoff) {
            ++discarded;
            continue;
        }
        w.push_back(1.0 / std::sqrt(1.0 - x));
    }
    const McEstimate e = mc_mean(w);
    const double chs = c_hs(n).value;

    MonteCarloConstant out;
    out.estimate = make(MeasureKind::SuperfidelityG, n, chs / e.mean, NormalizationMethod::MonteCarlo,
                        samples);
    out.estimate.std_error = chs * e.std_error / (e.mean * e.mean);
    out.mean_inverse_sqrt = e.mean;
    out.mean_inverse_sqrt_se = e.std_error;
    out.discarded = discarded;
    out.unstable = static_cast<double>(discarded) > 1e-4 * static_cast<double>(samples);
    return out;
}

double series_coefficient(int k) {
    if (k < 0) throw DomainError("series_coefficient: k must be non-negative");
    double a = 1.0;
    for (int j = 1; j <= k; ++j) a *= (2.0 * j - 1.0) / (2.0 * j);
    return a;
}

double purity_moment_hs_closed_form(int n, int k) {
    require_dim(n, "purity_moment_hs_closed_form");
    switch (k) {
        case 0: return 1.0;
        case 1: return purity_mean_hs(n);
        case 2: {
            const double m = purity_mean_hs(n);
            return m * m + purity_variance_hs(n);
        }
        default:
            throw UnvalidatedMomentSource(
                "closed-form purity moments are validated only for k <= 2; use the Monte-Carlo source");
    }
}

MomentEstimate purity_moment_hs(int n, int k, std::uint64_t samples, const ShardPlan& plan) {
    require_dim(n, "purity_moment_hs");
    if (k < 1) throw DomainError("purity_moment_hs: k must be at least 1");
    std::vector<double> p = hs_purities(n, samples, plan);
    for (double& x : p) x = std::pow(x, k);
    const McEstimate e = mc_mean(p);
    return {e.mean, e.std_error, samples};
}

SeriesEstimate c_g_series(int n, int k_max, MomentSource source, std::uint64_t samples,
                          const ShardPlan& plan) {
    require_dim(n, "c_g_series");
    if (k_max < 1) throw DomainError("c_g_series: k_max must be at least 1");

    std::vector<double> moments(static_cast<std::size_t>(k_max) + 1, 0.0);
    if (source == MomentSource::ClosedForm) {
        for (int k = 0; k <= k_max; ++k) moments[k] = purity_moment_hs_closed_form(n, k);
    } else {
        if (samples < 1000) throw DomainError("c_g_series: Monte-Carlo moments need >= 1000 samples");
        const std::vector<double> p = hs_purities(n, samples, plan);
        for (double x : p) {
            double power = 1.0;
            for (int k = 0; k <= k_max; ++k) {
                moments[k] += power;
                power *= x;
            }
        }
        for (double& m : moments) m /= static_cast<double>(samples);
    }

    const double inv_chs = 1.0 / c_hs(n).value;
    SeriesEstimate out;
    out.inverse_partial_sums.reserve(moments.size());
    double sum = 0.0;
    double term = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        term = series_coefficient(k) * moments[k] * inv_chs;
        sum += term;
        out.inverse_partial_sums.push_back(sum);
    }
    out.last_term = term;
    out.estimate = make(MeasureKind::SuperfidelityG, n, 1.0 / sum, NormalizationMethod::Series,
                        static_cast<std::uint64_t>(k_max) + 1);
    return out;
}

}  // namespace superfid
