#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "superfid/core.hpp"
#include "superfid/quadrature.hpp"

namespace superfid {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
    std::uint64_t n = 0;
};

/// Sample mean with standard error; needs at least two values.
McEstimate mc_mean(std::span<const double> values);

struct VarianceEstimate {
    double variance = 0.0;   ///< unbiased sample variance
    double std_error = 0.0;  ///< sqrt((m4 - m2^2) / n), central moments
    std::uint64_t n = 0;
};

VarianceEstimate mc_variance(std::span<const double> values);

struct GofResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::int64_t bins_or_n = 0;
};

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

/// One-sample Kolmogorov-Smirnov test against `cdf` on [lo, hi], with the
/// asymptotic p-value (Stephens' finite-n correction of the argument).
/// Needs n >= 50; the cdf is checked for monotonicity on a 1000-step grid.
GofResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                  double lo = 0.0, double hi = 1.0);

GofResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square on binned counts against bin probabilities. Adjacent
/// bins are pooled until every pooled bin expects at least 5 counts;
/// degrees of freedom = pooled bins - 1.
GofResult chi_square_counts(std::span<const double> observed,
                            std::span<const double> probabilities);

/// Histogram of `samples` on [lo, hi] with `bins` equal bins against `density`,
/// which is normalized over the support by quadrature first.
GofResult chi_square_gof(std::span<const double> samples, const std::function<double(double)>& density,
                         int bins, double lo, double hi);

// Qutrit eigenvalue histograms. Sorted spectra live in the chamber
// l1 >= l2 >= l3, a triangle with barycentric coordinates
// (l1 - l2, 2 (l2 - l3), 3 l3); it is cut into subdivisions^2 sub-triangles.

int qutrit_chamber_bin(const EigenvalueVector& lambda, int subdivisions);

/// Probability of every chamber bin under a normalized, permutation-symmetric
/// simplex density (6 x its integral over the sub-triangle).
std::vector<double> qutrit_chamber_probabilities(const SimplexFunction& density, int subdivisions);

GofResult chi_square_qutrit(std::span<const EigenvalueVector> samples,
                            std::span<const double> bin_probabilities, int subdivisions);

}  // namespace superfid
