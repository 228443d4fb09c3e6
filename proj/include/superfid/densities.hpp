#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace superfid {

enum class MeasureKind { HilbertSchmidt, Bures, SuperfidelityG };

/// "hs", "bures", "g".
std::string_view measure_tag(MeasureKind m);
std::optional<MeasureKind> parse_measure(std::string_view tag);

// Joint eigenvalue densities, up to normalization. All are symmetric under
// permutations of the eigenvalues. Inputs must lie on the simplex
// (entries >= 0, sum 1 within 1e-12); otherwise DomainError.

/// prod_{i<j} (l_i - l_j)^2 / sqrt(1 - sum_i l_i^2). Singularity at pure states.
double density_g_unnormalized(std::span<const double> lambda);
/// prod_{i<j} (l_i - l_j)^2 / (l_i + l_j) / sqrt(l_1 ... l_N). Singularity if any l_i = 0.
double density_bures_unnormalized(std::span<const double> lambda);
/// prod_{i<j} (l_i - l_j)^2.
double density_hs_unnormalized(std::span<const double> lambda);

// Log forms; -infinity where the Vandermonde factor vanishes.
double log_density_g_unnormalized(std::span<const double> lambda);
double log_density_bures_unnormalized(std::span<const double> lambda);
double log_density_hs_unnormalized(std::span<const double> lambda);

double density_unnormalized(MeasureKind m, std::span<const double> lambda);
double log_density_unnormalized(MeasureKind m, std::span<const double> lambda);

/// Unnormalized G/Bures ratio: sqrt(prod l_i) prod_{i<j}(l_i + l_j) / sqrt(1 - sum l_i^2).
double density_ratio_g_bures(std::span<const double> lambda);
double log_density_ratio_g_bures(std::span<const double> lambda);

// Hilbert-Schmidt purity statistics.
double purity_mean_hs(int n);
double purity_variance_hs(int n);

/// Volume of the projective unitary group, pi^{N(N-1)/2} / prod_{d=1}^{N-1} d!.
double projective_unitary_volume(int n);

// Qubit marginal law of one eigenvalue under the G measure.
double cdf_g2(double t);
/// (2/pi) (2t - 1)^2 / sqrt(t (1 - t)); Singularity at t in {0, 1}.
double pdf_g2_marginal(double t);

struct GridPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double density = 0.0;  ///< normalized density at the point
    double weight = 0.0;   ///< quadrature weight of the cell the point represents
    bool singular = false; ///< density not evaluated (boundary or pure point)
};

/// Normalized qutrit eigenvalue density on a symmetric grid.
///
/// Points are centroids of a uniform triangulation of the plane x_1+x_2+x_3=1
/// (resolution^2 cells), mapped onto the simplex by lambda_i = x_i^2 / |x|^2.
/// The square-root coordinates keep the boundary singularities of the Bures
/// density integrable cell by cell, so sum(density * weight) approximates 1.
/// The point set is closed under permutations; it contains the barycenter
/// when resolution = 1 (mod 3). Measures: G (C_3^G exact) and Bures (C_3^B by
/// quadrature), plus HS.
std::vector<GridPoint> density_grid_qutrit(int resolution, MeasureKind measure);

}  // namespace superfid
