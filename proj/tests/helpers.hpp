#pragma once

#include <random>

#include "topo/numerics/linalg.hpp"

namespace topo::testing {

using numerics::Complex;
using numerics::ComplexMatrix;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n) { return random_matrix(rng, n, n); }

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix m = random_matrix(rng, n);
  return (m + m.adjoint()) / 2.0;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace topo::testing
