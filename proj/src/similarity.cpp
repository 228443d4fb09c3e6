#include "superfid/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace superfid {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
    if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": dimensions differ");
}

// Eigenvalues below a few ulps of the largest one are round-off. Taking their
// square roots would inject errors of order sqrt(eps), so they are zeroed.
Eigen::VectorXd cleaned(const Eigen::VectorXd& ev) {
    const double cutoff = 8.0 * static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() *
                          std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    return ev.unaryExpr([cutoff](double x) { return x > cutoff ? x : 0.0; });
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    const Eigen::VectorXd root = cleaned(solver.eigenvalues()).cwiseSqrt();
    return solver.eigenvectors() * root.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

// 1 - tr rho^2 = 2 sum_{i<j} l_i l_j over the cleaned spectrum, so states that are
// pure up to round-off get exactly zero.
double mixedness(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd l = cleaned(solver.eigenvalues());
    double pairs = 0.0;
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
        pairs += l[i] * prefix;
        prefix += l[i];
    }
    return 2.0 * pairs / (prefix * prefix);
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "fidelity");
    // tr|sqrt(rho) sqrt(sigma)| is the sum of the singular values of the product,
    // i.e. of the square roots of the eigenvalues of sqrt(rho) sigma sqrt(rho).
    const ComplexMatrix product = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
    const double root_sum = Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double superfidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "superfidelity");
    // tr(rho sigma) = sum_ij rho_ij conj(sigma_ij) for Hermitian sigma.
    const double overlap = (rho.matrix().array() * sigma.matrix().array().conjugate()).sum().real();
    return std::clamp(overlap + std::sqrt(mixedness(rho) * mixedness(sigma)), 0.0, 1.0);
}

double dist_g_squared(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "dist_g");
    // 2 - 2G = ||rho - sigma||_F^2 + (sqrt(1 - tr rho^2) - sqrt(1 - tr sigma^2))^2,
    // which has no cancellation near rho = sigma.
    const double gap = std::sqrt(mixedness(rho)) - std::sqrt(mixedness(sigma));
    return std::min(2.0, (rho.matrix() - sigma.matrix()).squaredNorm() + gap * gap);
}

double dist_bprime_squared(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::max(0.0, 2.0 - 2.0 * fidelity(rho, sigma));
}

double dist_g(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::sqrt(dist_g_squared(rho, sigma));
}

double dist_bures(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(fidelity(rho, sigma))));
}

namespace {

struct Eigenframe {
    Eigen::VectorXd lambda;
    ComplexMatrix drho;  // tangent expressed in the eigenbasis of rho
};

Eigenframe to_eigenframe(const DensityMatrix& rho, const TangentDirection& drho) {
    if (rho.dim() != drho.dim()) {
        throw DimensionMismatch("line element: state and tangent dimensions differ");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
    const ComplexMatrix& v = solver.eigenvectors();
    return {solver.eigenvalues().cwiseMax(0.0), v.adjoint() * drho.matrix() * v};
}

}  // namespace

LineElementValue line_element_g(const DensityMatrix& rho, const TangentDirection& drho) {
    const Eigenframe f = to_eigenframe(rho, drho);
    const double mixedness = 1.0 - f.lambda.squaredNorm();
    if (mixedness <= 1e-10) {
        throw Singularity("line_element_g: state is (numerically) pure");
    }
    double weighted_diag = 0.0;
    for (Eigen::Index i = 0; i < f.lambda.size(); ++i) {
        weighted_diag += f.lambda[i] * f.drho(i, i).real();
    }
    // sum_i <i|drho^2|i> = ||drho||_F^2 for Hermitian drho.
    const double value = weighted_diag * weighted_diag / mixedness + f.drho.squaredNorm();
    return {value};
}

LineElementValue line_element_bprime(const DensityMatrix& rho, const TangentDirection& drho) {
    const Eigenframe f = to_eigenframe(rho, drho);
    const double zero_threshold = 1e-12 * std::max(1.0, f.drho.norm());
    double value = 0.0;
    const Eigen::Index n = f.lambda.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double num = std::norm(f.drho(i, j));
            const double den = f.lambda[i] + f.lambda[j];
            if (den <= 1e-12) {
                if (std::sqrt(num) > zero_threshold) {
                    throw Singularity("line_element_bprime: vanishing eigenvalue pair");
                }
                continue;
            }
            value += num / den;
        }
    }
    return {value};
}

FiniteDifference fd_second_derivative(const MetricSquared& metric_sq, const DensityMatrix& rho,
                                      const TangentDirection& drho, double h) {
    if (rho.dim() != drho.dim()) {
        throw DimensionMismatch("fd_second_derivative: state and tangent dimensions differ");
    }
    if (!(h > 0.0)) throw DomainError("fd_second_derivative: step must be positive");
    const double f0 = metric_sq(rho, rho);
    for (int shrink = 0; shrink <= kMaxFdShrinks; ++shrink) {
        const ComplexMatrix plus = rho.matrix() + h * drho.matrix();
        const ComplexMatrix minus = rho.matrix() - h * drho.matrix();
        if (is_valid_density(plus) && is_valid_density(minus)) {
            const double fp = metric_sq(rho, DensityMatrix(plus));
            const double fm = metric_sq(rho, DensityMatrix(minus));
            return {(fp - 2.0 * f0 + fm) / (h * h), h, shrink};
        }
        h *= 0.5;
    }
    throw StepSizeError("fd_second_derivative: perturbed state leaves the PSD cone");
}

}  // namespace superfid
