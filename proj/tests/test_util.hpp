#pragma once

#include <cmath>
#include <vector>

#include "superfid/core.hpp"
#include "superfid/samplers.hpp"

namespace superfid::testing {

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline DensityMatrix diag_state(std::vector<double> v) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<int>(v.size()), static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return DensityMatrix(m);
}

inline DensityMatrix basis_state(int n, int k) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi[k] = 1.0;
    return pure_state(psi);
}

inline DensityMatrix random_pure(int n, RngStream& rng) {
    Eigen::VectorXcd psi(n);
    for (int i = 0; i < n; ++i) psi[i] = rng.complex_normal();
    return pure_state(psi);
}

/// HS state mixed towards I/N so that small perturbations stay positive.
inline DensityMatrix random_interior_state(int n, RngStream& rng, double mix = 0.3) {
    ComplexMatrix m = (1.0 - mix) * sample_hs(n, rng).matrix() +
                      mix / n * ComplexMatrix::Identity(n, n);
    return DensityMatrix(m);
}

}  // namespace superfid::testing
