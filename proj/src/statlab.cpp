#include "superfid/statlab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace superfid {

McEstimate mc_mean(std::span<const double> values) {
    if (values.size() < 2) throw DomainError("mc_mean: need at least two values");
    const double n = static_cast<double>(values.size());
    // Two-pass for accuracy.
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / (n - 1.0);
    return {mean, std::sqrt(var / n), values.size()};
}

VarianceEstimate mc_variance(std::span<const double> values) {
    if (values.size() < 4) throw DomainError("mc_variance: need at least four values");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    return {m2 * n / (n - 1.0), std::sqrt(std::max(m4 - m2 * m2, 0.0) / n), values.size()};
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    constexpr double kPi = boost::math::constants::pi<double>();
    if (x < 1.18) {
        // Theta-function form converges fast for small x.
        const double y = -kPi * kPi / (8.0 * x * x);
        double s = 0.0;
        for (int k = 1; k <= 9; k += 2) s += std::exp(k * k * y);
        return std::clamp(1.0 - std::sqrt(2.0 * kPi) / x * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
    const double root = std::sqrt(n_eff);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

GofResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                  double lo, double hi) {
    if (samples.size() < 50) throw GofError("ks_test: need at least 50 samples");
    double prev = cdf(lo);
    for (int k = 1; k <= 1000; ++k) {
        const double c = cdf(lo + (hi - lo) * k / 1000.0);
        if (c < prev - 1e-12) throw GofError("ks_test: cdf is not monotone");
        prev = c;
    }
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(std::clamp(x[i], lo, hi));
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return {d, ks_p_value(d, n), static_cast<std::int64_t>(x.size())};
}

GofResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 50 || b.size() < 50) throw GofError("ks_two_sample: need at least 50 samples each");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(i / n - j / m));
    }
    return {d, ks_p_value(d, n * m / (n + m)), static_cast<std::int64_t>(x.size() + y.size())};
}

GofResult chi_square_counts(std::span<const double> observed,
                            std::span<const double> probabilities) {
    if (observed.size() != probabilities.size()) {
        throw GofError("chi_square_counts: observed and probability sizes differ");
    }
    if (observed.size() < 2) throw GofError("chi_square_counts: need at least two bins");
    const double total_p = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (!std::isfinite(total_p) || total_p <= 0.0) {
        throw GofError("chi_square_counts: probabilities do not have a finite positive sum");
    }
    const double n = std::accumulate(observed.begin(), observed.end(), 0.0);

    std::vector<std::pair<double, double>> pooled;  // (observed, expected)
    double o = 0.0;
    double e = 0.0;
    for (std::size_t b = 0; b < observed.size(); ++b) {
        o += observed[b];
        e += n * probabilities[b] / total_p;
        if (e >= 5.0) {
            pooled.emplace_back(o, e);
            o = 0.0;
            e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (pooled.empty()) {
            pooled.emplace_back(o, e);
        } else {
            pooled.back().first += o;
            pooled.back().second += e;
        }
    }
    if (pooled.size() < 2) throw GofError("chi_square_counts: fewer than two bins after pooling");
    double stat = 0.0;
    for (const auto& [obs, exp] : pooled) stat += (obs - exp) * (obs - exp) / exp;
    const double dof = static_cast<double>(pooled.size() - 1);
    return {stat, boost::math::gamma_q(0.5 * dof, 0.5 * stat),
            static_cast<std::int64_t>(pooled.size())};
}

GofResult chi_square_gof(std::span<const double> samples, const std::function<double(double)>& density,
                         int bins, double lo, double hi) {
    if (bins < 2) throw GofError("chi_square_gof: need at least two bins");
    if (!(hi > lo)) throw GofError("chi_square_gof: empty support");
    std::vector<double> prob(static_cast<std::size_t>(bins));
    const double width = (hi - lo) / bins;
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + b * width;
        const double c = (b + 1 == bins) ? hi : a + width;
        try {
            prob[static_cast<std::size_t>(b)] = endpoint_singular_quadrature(density, a, c, 1e-10).value;
        } catch (const std::exception& e) {
            throw GofError(std::string("chi_square_gof: bin integral failed: ") + e.what());
        }
        total += prob[static_cast<std::size_t>(b)];
    }
    if (!std::isfinite(total) || total <= 0.0) {
        throw GofError("chi_square_gof: density integral is not finite and positive");
    }
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double x : samples) {
        if (x < lo || x > hi) throw GofError("chi_square_gof: sample outside support");
        const int b = std::min(static_cast<int>((x - lo) / width), bins - 1);
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    return chi_square_counts(counts, prob);
}

namespace {

// Linear index of sub-triangle (i, j, up) in an m x m triangulation.
struct TriangleIndex {
    explicit TriangleIndex(int m) : m_(m) {}
    int up(int i, int j) const { return i * m_ - i * (i - 1) / 2 + j; }
    int down(int i, int j) const {
        const int ups = m_ * (m_ + 1) / 2;
        return ups + i * (m_ - 1) - i * (i - 1) / 2 + j;
    }
    int m_;
};

}  // namespace

int qutrit_chamber_bin(const EigenvalueVector& lambda, int subdivisions) {
    if (lambda.dim() != 3) throw InvalidDimension("qutrit_chamber_bin: expects N = 3");
    if (subdivisions < 1) throw GofError("qutrit_chamber_bin: subdivisions must be positive");
    const int m = subdivisions;
    const double a = std::max(lambda[0] - lambda[1], 0.0) * m;
    const double b = std::max(2.0 * (lambda[1] - lambda[2]), 0.0) * m;
    int i = std::min(static_cast<int>(a), m - 1);
    int j = std::min(static_cast<int>(b), m - 1 - i);
    const TriangleIndex index(m);
    if ((a - i) + (b - j) < 1.0 || i + j >= m - 1) return index.up(i, j);
    return index.down(i, j);
}

std::vector<double> qutrit_chamber_probabilities(const SimplexFunction& density, int subdivisions) {
    using boost::math::quadrature::gauss_kronrod;
    if (subdivisions < 1) throw GofError("qutrit_chamber_probabilities: subdivisions must be positive");
    const int m = subdivisions;
    const TriangleIndex index(m);
    std::vector<double> prob(static_cast<std::size_t>(m) * m, 0.0);
    const double h = 1.0 / m;

    // Integral over the (alpha, beta) triangle p0, p1, p2 via the Duffy map
    // p0 + u (p1 - p0) + u v (p2 - p1), which collapses onto p0.
    auto integrate = [&](std::array<double, 2> p0, std::array<double, 2> p1, std::array<double, 2> p2) {
        const double det = std::abs((p1[0] - p0[0]) * (p2[1] - p1[1]) - (p1[1] - p0[1]) * (p2[0] - p1[0]));
        auto outer = [&](double u) {
            auto inner = [&](double v) {
                const double al = p0[0] + u * (p1[0] - p0[0]) + u * v * (p2[0] - p1[0]);
                const double be = p0[1] + u * (p1[1] - p0[1]) + u * v * (p2[1] - p1[1]);
                const double ga = std::max(1.0 - al - be, 0.0);
                const std::array<double, 3> lam{al + be / 2.0 + ga / 3.0, be / 2.0 + ga / 3.0, ga / 3.0};
                const double s = lam[0] + lam[1] + lam[2];
                const std::array<double, 3> l{lam[0] / s, lam[1] / s, lam[2] / s};
                return density(l);
            };
            return u * gauss_kronrod<double, 15>::integrate(inner, 0.0, 1.0, 10, 1e-10);
        };
        return det * gauss_kronrod<double, 15>::integrate(outer, 0.0, 1.0, 10, 1e-10);
    };
    // Apex at the vertex with the largest alpha: the pure state sits at alpha = 1.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; i + j < m; ++j) {
            const std::array<double, 2> a{i * h, j * h};
            const std::array<double, 2> b{(i + 1) * h, j * h};
            const std::array<double, 2> c{i * h, (j + 1) * h};
            prob[static_cast<std::size_t>(index.up(i, j))] = integrate(b, c, a);
            if (i + j <= m - 2) {
                const std::array<double, 2> d{(i + 1) * h, (j + 1) * h};
                prob[static_cast<std::size_t>(index.down(i, j))] = integrate(b, d, c);
            }
        }
    }
    return prob;
}

GofResult chi_square_qutrit(std::span<const EigenvalueVector> samples,
                            std::span<const double> bin_probabilities, int subdivisions) {
    const std::size_t bins = static_cast<std::size_t>(subdivisions) * subdivisions;
    if (bin_probabilities.size() != bins) {
        throw GofError("chi_square_qutrit: probability table does not match subdivisions");
    }
    std::vector<double> counts(bins, 0.0);
    for (const auto& lam : samples) counts[static_cast<std::size_t>(qutrit_chamber_bin(lam, subdivisions))] += 1.0;
    return chi_square_counts(counts, bin_probabilities);
}

}  // namespace superfid
