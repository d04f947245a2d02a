#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace topo::numerics {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kClusterTol = 1e-8;

/// Eigenpairs of a general complex matrix. Eigenvalues within the cluster
/// tolerance of each other are grouped; a cluster whose geometric multiplicity
/// is smaller than its size is marked defective for every member.
struct EigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;  // unit-norm columns
  std::vector<int> cluster;    // cluster id per eigenvalue
  std::vector<bool> defective; // per eigenvalue
};

EigenDecomposition eigen(const ComplexMatrix& a, double tol = kClusterTol);

/// Unitary Schur form A = Q T Q* with the diagonal entries flagged by `select`
/// moved to the leading block (order among them preserved).
struct OrderedSchur {
  ComplexMatrix q;
  ComplexMatrix t;
  int leading = 0;
};

OrderedSchur ordered_schur(const ComplexMatrix& a,
                           const std::function<bool(Complex)>& select);

/// Orthonormal basis of the invariant subspace belonging to the selected
/// eigenvalues.
ComplexMatrix invariant_subspace(const ComplexMatrix& a,
                                 const std::function<bool(Complex)>& select);

/// X with A X = B. Never forms an explicit inverse; throws SingularMatrix when
/// the 1-norm condition estimate exceeds `cond_limit`.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b,
                    double cond_limit = kConditionLimit);

/// X with X A = B, i.e. B A^{-1}.
ComplexMatrix solve_right(const ComplexMatrix& b, const ComplexMatrix& a,
                          double cond_limit = kConditionLimit);

/// Reciprocal of the estimated 1-norm condition number (0 when singular).
double rcond(const ComplexMatrix& a);

struct HermitianEigen {
  RealVector eigenvalues;  // ascending
  ComplexMatrix eigenvectors;
};

/// Eigenpairs of the Hermitian part of `a` (callers validate hermiticity).
HermitianEigen hermitian_eigen(const ComplexMatrix& a);

double spectral_norm(const ComplexMatrix& a);
double min_singular_value(const ComplexMatrix& a);
double hermiticity_residual(const ComplexMatrix& a);
double unitarity_residual(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);

/// Orthonormal basis of the column span (thin QR); columns must be independent.
ComplexMatrix orthonormalize(const ComplexMatrix& columns);

/// f(H) for Hermitian H, applied through its eigenbasis.
ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<Complex(double)>& f);

}  // namespace topo::numerics
