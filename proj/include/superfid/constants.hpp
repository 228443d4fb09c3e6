#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "superfid/batch.hpp"
#include "superfid/densities.hpp"

namespace superfid {

enum class NormalizationMethod { Exact, JensenUpperBound, Series, MonteCarlo, Quadrature };

std::string_view method_tag(NormalizationMethod m);  // exact, jensen, series, mc, quadrature

/// Normalization constant C_N of an eigenvalue density (reciprocal of its simplex integral).
struct NormalizationEstimate {
    MeasureKind measure = MeasureKind::SuperfidelityG;
    int dim = 0;
    double value = 0.0;
    NormalizationMethod method = NormalizationMethod::Exact;
    std::optional<double> std_error;  ///< present iff method is MonteCarlo
    std::uint64_t terms_or_samples = 0;

    bool is_upper_bound() const noexcept { return method == NormalizationMethod::JensenUpperBound; }
};

/// Gamma(N^2) / prod_{k=1}^N Gamma(k) Gamma(k+1).
NormalizationEstimate c_hs(int n);

/// Closed forms: C_2^G = (2 sqrt2 / 3 pi) C_2^HS, C_3^G = (432 sqrt2 / 317 pi) C_3^HS.
/// UnsupportedDimension for other N.
NormalizationEstimate c_g_exact(int n);

/// Upper bound C_N^HS sqrt(1 - 2N/(N^2+1)) from Jensen's inequality.
NormalizationEstimate c_g_jensen_bound(int n);

/// 1 / simplex_quadrature(unnormalized density), N in {2, 3}.
NormalizationEstimate c_quadrature(MeasureKind measure, int n, double tolerance = 1e-11);
NormalizationEstimate c_g_quadrature(int n, double tolerance = 1e-11);
/// Cached per process (the Bures constant has no closed form here).
const NormalizationEstimate& c_bures_quadrature(int n);

struct MonteCarloConstant {
    NormalizationEstimate estimate;
    double mean_inverse_sqrt = 0.0;  ///< E_HS[1 / sqrt(1 - tr rho^2)]
    double mean_inverse_sqrt_se = 0.0;
    std::uint64_t discarded = 0;     ///< near-pure samples skipped
    bool unstable = false;           ///< discarded fraction above 1e-4
};

/// 1/C_N^G = (1/C_N^HS) E_HS[1/sqrt(1 - tr rho^2)]; the standard error of C
/// follows from the delta method on the reciprocal.
MonteCarloConstant c_g_monte_carlo(int n, std::uint64_t samples, const ShardPlan& plan);

enum class MomentSource { ClosedForm, MonteCarlo };

struct SeriesEstimate {
    NormalizationEstimate estimate;       ///< C_N^G from the k_max partial sum
    std::vector<double> inverse_partial_sums;  ///< 1/C_N^G after terms 0..k
    double last_term = 0.0;               ///< magnitude of term k_max (in units of 1/C)
};

/// 1/C_N^G = (1/C_N^HS) sum_k (2k-1)!!/(k! 2^k) E_HS[(tr rho^2)^k], truncated at k_max.
///
/// MomentSource::ClosedForm only knows k <= 2 (from the HS purity mean and
/// variance) and throws UnvalidatedMomentSource beyond that.
SeriesEstimate c_g_series(int n, int k_max, MomentSource source, std::uint64_t samples = 0,
                          const ShardPlan& plan = {});

/// Series coefficient (2k-1)!!/(k! 2^k) = binom(2k, k) / 4^k.
double series_coefficient(int k);

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Monte-Carlo oracle for E_HS[(tr rho^2)^k].
MomentEstimate purity_moment_hs(int n, int k, std::uint64_t samples, const ShardPlan& plan);

/// Closed-form E_HS[(tr rho^2)^k] for k in {0, 1, 2}; UnvalidatedMomentSource otherwise.
double purity_moment_hs_closed_form(int n, int k);

}  // namespace superfid
