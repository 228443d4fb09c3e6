#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "superfid/errors.hpp"
#include "superfid/rng.hpp"

namespace superfid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
/// Eigenvalues in [-kPsdTolerance, 0) are treated as round-off.
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kSimplexSumTolerance = 1e-12;

/// Point of the eigenvalue simplex, sorted descending.
class EigenvalueVector {
public:
    /// Takes values already in canonical (descending) order; throws InvalidState otherwise.
    explicit EigenvalueVector(std::vector<double> values);

    /// Sorts descending (stable, so ties keep their input order) and validates.
    static EigenvalueVector sorted(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

/// N x N Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
public:
    /// Full validation, including an eigenvalue check for positivity.
    explicit DensityMatrix(ComplexMatrix m);

    /// For matrices positive by construction (G G^dagger, U diag U^dagger).
    /// Hermiticity is enforced by symmetrization and the trace is checked,
    /// but no eigendecomposition is performed.
    static DensityMatrix from_positive(ComplexMatrix m);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix u);
    static UnitaryMatrix identity(int dim);

    int dim() const noexcept { return static_cast<int>(u_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return u_; }

private:
    ComplexMatrix u_;
};

/// Hermitian traceless perturbation of a density matrix.
class TangentDirection {
public:
    explicit TangentDirection(ComplexMatrix d);

    int dim() const noexcept { return static_cast<int>(d_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return d_; }

private:
    ComplexMatrix d_;
};

/// Throws InvalidState unless m is a valid density matrix.
void validate_density(const ComplexMatrix& m);
bool is_valid_density(const ComplexMatrix& m);

ComplexMatrix ginibre(int dim, RngStream& rng);
UnitaryMatrix haar_unitary(int dim, RngStream& rng);
DensityMatrix compose_state(const EigenvalueVector& eigs, const UnitaryMatrix& u);
EigenvalueVector spectrum(const DensityMatrix& rho);
double purity(const DensityMatrix& rho);

/// Eigenvalues (ascending) of a Hermitian matrix; throws InvalidState if m is not Hermitian.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

/// Random unit-Frobenius-norm Hermitian traceless direction.
TangentDirection random_tangent(int dim, RngStream& rng);

/// Pure state |psi><psi| for a (not necessarily normalized) nonzero vector.
DensityMatrix pure_state(const Eigen::VectorXcd& psi);

}  // namespace superfid
