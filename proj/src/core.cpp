#include "superfid/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace superfid {

namespace {

double hermitian_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidDimension(std::string(what) + ": expected a non-empty square matrix");
    }
}

void validate_simplex(const std::vector<double>& v) {
    if (v.empty()) {
        throw InvalidDimension("eigenvalue vector: dimension must be at least 1");
    }
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidState("eigenvalue vector: entry " + std::to_string(x) + " outside [0, 1]");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
        throw InvalidState("eigenvalue vector: entries sum to " + std::to_string(sum));
    }
}

}  // namespace

EigenvalueVector::EigenvalueVector(std::vector<double> values) : values_(std::move(values)) {
    validate_simplex(values_);
    if (!std::is_sorted(values_.begin(), values_.end(), std::greater<>())) {
        throw InvalidState("eigenvalue vector: values must be sorted descending");
    }
}

EigenvalueVector EigenvalueVector::sorted(std::vector<double> values) {
    std::stable_sort(values.begin(), values.end(), std::greater<>());
    return EigenvalueVector(std::move(values));
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    require_square(m, "hermitian_eigenvalues");
    if (hermitian_defect(m) > kHermitianTolerance) {
        throw InvalidState("matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void validate_density(const ComplexMatrix& m) {
    require_square(m, "density matrix");
    if (hermitian_defect(m) > kHermitianTolerance) {
        throw InvalidState("density matrix is not Hermitian");
    }
    const Complex tr = m.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTolerance || std::abs(tr.imag()) > kTraceTolerance) {
        throw InvalidState("density matrix trace differs from 1");
    }
    const Eigen::VectorXd ev = hermitian_eigenvalues(m);
    if (ev.minCoeff() < -kPsdTolerance) {
        throw InvalidState("density matrix has eigenvalue " + std::to_string(ev.minCoeff()));
    }
}

bool is_valid_density(const ComplexMatrix& m) {
    try {
        validate_density(m);
        return true;
    } catch (const Error&) {
        return false;
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) { validate_density(m_); }

DensityMatrix DensityMatrix::from_positive(ComplexMatrix m) {
    require_square(m, "density matrix");
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        throw InvalidState("density matrix trace differs from 1");
    }
    return DensityMatrix(std::move(h), Unchecked{});
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix u) : u_(std::move(u)) {
    require_square(u_, "unitary matrix");
    const ComplexMatrix defect = u_ * u_.adjoint() - ComplexMatrix::Identity(u_.rows(), u_.cols());
    if (defect.cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw InvalidState("matrix is not unitary");
    }
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
    if (dim < 1) throw InvalidDimension("unitary: dimension must be at least 1");
    return UnitaryMatrix(ComplexMatrix::Identity(dim, dim));
}

TangentDirection::TangentDirection(ComplexMatrix d) : d_(std::move(d)) {
    require_square(d_, "tangent direction");
    if (hermitian_defect(d_) > kHermitianTolerance) {
        throw InvalidState("tangent direction is not Hermitian");
    }
    if (std::abs(d_.trace()) > kTraceTolerance) {
        throw InvalidState("tangent direction is not traceless");
    }
}

ComplexMatrix ginibre(int dim, RngStream& rng) {
    if (dim < 1) throw InvalidDimension("ginibre: dimension must be at least 1");
    ComplexMatrix g(dim, dim);
    // Column-major fill order is part of the reproducibility contract.
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
    }
    return g;
}

UnitaryMatrix haar_unitary(int dim, RngStream& rng) {
    if (dim < 1) throw InvalidDimension("haar_unitary: dimension must be at least 1");
    const ComplexMatrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    // Fix the phase freedom of the QR factorization: make diag(R) real positive.
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
    }
    return UnitaryMatrix(std::move(q));
}

DensityMatrix compose_state(const EigenvalueVector& eigs, const UnitaryMatrix& u) {
    if (static_cast<int>(eigs.dim()) != u.dim()) {
        throw DimensionMismatch("compose_state: eigenvalue and unitary dimensions differ");
    }
    const int n = u.dim();
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam[i] = eigs[static_cast<std::size_t>(i)];
    ComplexMatrix rho = u.matrix() * lam.cast<Complex>().asDiagonal() * u.matrix().adjoint();
    // Remove the O(eps) trace drift of the product before the trace check.
    rho /= rho.trace().real();
    return DensityMatrix::from_positive(std::move(rho));
}

EigenvalueVector spectrum(const DensityMatrix& rho) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho.matrix());
    std::vector<double> values(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double x = ev[i];
        if (x < -kPsdTolerance) {
            throw InvalidState("spectrum: eigenvalue " + std::to_string(x) + " below tolerance");
        }
        values[static_cast<std::size_t>(i)] = std::max(x, 0.0);
    }
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    for (double& x : values) x = std::min(x / sum, 1.0);
    return EigenvalueVector::sorted(std::move(values));
}

double purity(const DensityMatrix& rho) { return rho.matrix().cwiseAbs2().sum(); }

TangentDirection random_tangent(int dim, RngStream& rng) {
    const ComplexMatrix g = ginibre(dim, rng);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    const Complex mean = h.trace() / static_cast<double>(dim);
    h.diagonal().array() -= mean;
    const double norm = h.norm();
    if (norm > 0.0) h /= norm;
    h = 0.5 * (h + h.adjoint());
    return TangentDirection(std::move(h));
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw InvalidState("pure_state: zero vector");
    ComplexMatrix rho = psi * psi.adjoint() / n2;
    rho /= rho.trace().real();
    return DensityMatrix::from_positive(std::move(rho));
}

}  // namespace superfid
