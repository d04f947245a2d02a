#include "topo/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "topo/error.hpp"

namespace topo::numerics {

namespace {

// Swaps the adjacent diagonal entries k, k+1 of the upper triangular `t` with a
// unitary Givens rotation, updating the Schur vectors `q` accordingly.
void swap_adjacent(ComplexMatrix& t, ComplexMatrix& q, Eigen::Index k) {
  const Complex t11 = t(k, k);
  const Complex t12 = t(k, k + 1);
  const Complex t22 = t(k + 1, k + 1);
  const Complex x1 = t12;
  const Complex x2 = t22 - t11;
  const double r = std::hypot(std::abs(x1), std::abs(x2));
  if (r == 0.0) return;
  const Complex c = x1 / r;
  const Complex s = x2 / r;
  Eigen::Matrix2cd g;
  g << c, -std::conj(s), s, std::conj(c);
  t.middleRows(k, 2) = (g.adjoint() * t.middleRows(k, 2)).eval();
  t.middleCols(k, 2) = (t.middleCols(k, 2) * g).eval();
  q.middleCols(k, 2) = (q.middleCols(k, 2) * g).eval();
  t(k + 1, k) = 0.0;
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

struct SchurForm {
  ComplexMatrix q;
  ComplexMatrix t;
};

SchurForm schur(const ComplexMatrix& a) {
  if (!all_finite(a)) {
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  }
  Eigen::ComplexSchur<ComplexMatrix> cs(a, true);
  if (cs.info() != Eigen::Success) {
    const double residual =
        (a - cs.matrixU() * cs.matrixT() * cs.matrixU().adjoint()).norm();
    throw Error(ErrorCode::NoConvergence, "complex Schur iteration did not converge",
                residual);
  }
  return {cs.matrixU(), cs.matrixT()};
}

// Moves the entries whose original positions are flagged in `mask` to the front.
int reorder_to_front(ComplexMatrix& t, ComplexMatrix& q, std::vector<bool> mask) {
  const auto n = t.rows();
  int front = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!mask[j]) continue;
    for (Eigen::Index m = j - 1; m >= front; --m) {
      swap_adjacent(t, q, m);
      std::swap(mask[m], mask[m + 1]);
    }
    ++front;
  }
  return front;
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  return a.array().real().isFinite().all() && a.array().imag().isFinite().all();
}

EigenDecomposition eigen(const ComplexMatrix& a, double tol) {
  const auto n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidArgument, "eigen: matrix not square");
  const SchurForm base = schur(a);
  const double scale = std::max(1.0, spectral_norm(a));

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(base.t(i, i) - base.t(j, j)) <= tol * scale) {
        parent[find_root(parent, int(i))] = find_root(parent, int(j));
      }
    }
  }

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.cluster.assign(n, -1);
  out.defective.assign(n, false);

  std::vector<int> roots;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = find_root(parent, int(i));
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }

  Eigen::Index col = 0;
  for (std::size_t c = 0; c < roots.size(); ++c) {
    std::vector<bool> mask(n);
    for (Eigen::Index i = 0; i < n; ++i) mask[i] = find_root(parent, int(i)) == roots[c];
    ComplexMatrix t = base.t;
    ComplexMatrix q = base.q;
    const int m = reorder_to_front(t, q, mask);

    const ComplexMatrix block = t.topLeftCorner(m, m);
    const ComplexMatrix basis = q.leftCols(m);
    const Complex mean = block.diagonal().mean();
    bool is_defective = false;
    ComplexMatrix vectors = basis;
    if (m > 1) {
      const ComplexMatrix shifted = block - mean * ComplexMatrix::Identity(m, m);
      Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int geometric = 0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (sv(j) <= 10.0 * tol * scale) ++geometric;
      }
      if (geometric < m) {
        is_defective = true;
        // Null directions (smallest singular values) come last in V.
        ComplexMatrix v(m, m);
        v.leftCols(geometric) = svd.matrixV().rightCols(geometric);
        v.rightCols(m - geometric) = svd.matrixV().leftCols(m - geometric);
        vectors = basis * v;
      }
    }
    for (int j = 0; j < m; ++j) {
      out.eigenvalues(col) = block(j, j);
      out.eigenvectors.col(col) = vectors.col(j).normalized();
      out.cluster[col] = int(c);
      out.defective[col] = is_defective;
      ++col;
    }
  }
  return out;
}

OrderedSchur ordered_schur(const ComplexMatrix& a,
                           const std::function<bool(Complex)>& select) {
  SchurForm s = schur(a);
  std::vector<bool> mask(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) mask[i] = select(s.t(i, i));
  OrderedSchur out;
  out.leading = reorder_to_front(s.t, s.q, mask);
  out.q = std::move(s.q);
  out.t = std::move(s.t);
  return out;
}

ComplexMatrix invariant_subspace(const ComplexMatrix& a,
                                 const std::function<bool(Complex)>& select) {
  OrderedSchur s = ordered_schur(a, select);
  return s.q.leftCols(s.leading);
}

double rcond(const ComplexMatrix& a) {
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) == Complex(0.0)) return 0.0;
  }
  const double r = lu.rcond();
  return std::isfinite(r) ? r : 0.0;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b, double cond_limit) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const auto diag = lu.matrixLU().diagonal();
  double rc = 1.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) == Complex(0.0)) rc = 0.0;
  }
  if (rc > 0.0) rc = lu.rcond();
  if (!std::isfinite(rc) || rc * cond_limit < 1.0) {
    const double estimate = rc > 0.0 && std::isfinite(rc) ? 1.0 / rc : HUGE_VAL;
    throw Error(ErrorCode::SingularMatrix,
                "condition estimate " + std::to_string(estimate) + " above limit",
                estimate);
  }
  return lu.solve(b);
}

ComplexMatrix solve_right(const ComplexMatrix& b, const ComplexMatrix& a,
                          double cond_limit) {
  return solve(a.adjoint(), b.adjoint(), cond_limit).adjoint();
}

HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  if (!all_finite(a)) {
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  }
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double hermiticity_residual(const ComplexMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const ComplexMatrix& a) {
  return (a.adjoint() * a - ComplexMatrix::Identity(a.cols(), a.cols())).norm();
}

ComplexMatrix orthonormalize(const ComplexMatrix& columns) {
  Eigen::HouseholderQR<ComplexMatrix> qr(columns);
  return qr.householderQ() * ComplexMatrix::Identity(columns.rows(), columns.cols());
}

ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                 const std::function<Complex(double)>& f) {
  const HermitianEigen es = hermitian_eigen(h);
  ComplexVector fx(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < fx.size(); ++i) fx(i) = f(es.eigenvalues(i));
  return es.eigenvectors * fx.asDiagonal() * es.eigenvectors.adjoint();
}

}  // namespace topo::numerics
