#pragma once

#include <functional>

#include "superfid/core.hpp"

namespace superfid {

/// Uhlmann fidelity [tr |sqrt(rho) sqrt(sigma)|]^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// tr(rho sigma) + sqrt(1 - tr rho^2) sqrt(1 - tr sigma^2).
double superfidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sqrt(2 - 2 G).
double dist_g(const DensityMatrix& rho, const DensityMatrix& sigma);
/// sqrt(2 - 2 sqrt(F)).
double dist_bures(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Squared distances used as inputs of the finite-difference oracle.
double dist_g_squared(const DensityMatrix& rho, const DensityMatrix& sigma);
/// 2 (1 - F); its Hessian is the B' line element.
double dist_bprime_squared(const DensityMatrix& rho, const DensityMatrix& sigma);

struct LineElementValue {
    double value = 0.0;
};

/// Quadratic form of the d_G metric at rho, evaluated in the eigenbasis of rho:
///   (sum_i lambda_i <i|drho|i>)^2 / (1 - sum_i lambda_i^2) + sum_i <i|drho^2|i>.
/// Normalized so that it equals (1/2) d^2/dt^2 [d_G^2(rho, rho + t drho)] at t = 0.
/// Throws Singularity for (numerically) pure rho.
LineElementValue line_element_g(const DensityMatrix& rho, const TangentDirection& drho);

/// sum_ij |<i|drho|j>|^2 / (lambda_i + lambda_j), i.e. (1/2) d^2/dt^2 [2(1 - F)].
LineElementValue line_element_bprime(const DensityMatrix& rho, const TangentDirection& drho);

using MetricSquared = std::function<double(const DensityMatrix&, const DensityMatrix&)>;

struct FiniteDifference {
    double value = 0.0;  ///< [f(h) - 2 f(0) + f(-h)] / h^2
    double step = 0.0;   ///< step actually used
    int shrinks = 0;
};

inline constexpr double kDefaultFdStep = 1e-3;
inline constexpr int kMaxFdShrinks = 4;

/// Central second difference of f(t) = metric_sq(rho, rho + t drho) at t = 0.
///
/// Returns the full second derivative, not half of it. If rho +- h drho is not a
/// density matrix the step is halved, at most kMaxFdShrinks times, after which
/// StepSizeError is thrown.
FiniteDifference fd_second_derivative(const MetricSquared& metric_sq, const DensityMatrix& rho,
                                      const TangentDirection& drho, double h = kDefaultFdStep);

}  // namespace superfid
