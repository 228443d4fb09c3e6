#pragma once

#include <functional>
#include <span>

namespace superfid {

/// Integrand over the eigenvalue simplex; receives (lambda_1, ..., lambda_N).
using SimplexFunction = std::function<double(std::span<const double>)>;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Integral over the eigenvalue simplex, N in {2, 3}.
///
/// Convention: unordered eigenvalues with Lebesgue measure on the first N-1
/// coordinates, d lambda_1 ... d lambda_{N-1}. Under this convention the
/// Vandermonde integral equals 1 / C_N^HS.
///
/// The substitution lambda_i = y_i^2, y on the positive orthant of the unit
/// sphere, has Jacobian 2^{N-1} prod_i y_i, which cancels inverse square-root
/// singularities on the simplex boundary. The remaining angular integrals are
/// nested adaptive Gauss-Kronrod. `tolerance` is relative; NonConvergence is
/// thrown (with the partial estimate) if the error estimate exceeds it.
QuadratureResult simplex_quadrature(const SimplexFunction& f, int n, double tolerance = 1e-10);

/// Adaptive Gauss-Kronrod on [a, b] for smooth integrands.
QuadratureResult interval_quadrature(const std::function<double(double)>& f, double a, double b,
                                     double tolerance = 1e-12);

/// Double-exponential quadrature on [a, b]; tolerates integrable endpoint singularities.
QuadratureResult endpoint_singular_quadrature(const std::function<double(double)>& f, double a,
                                              double b, double tolerance = 1e-12);

}  // namespace superfid
