#include "topo/krein/krein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "topo/error.hpp"

namespace topo::krein {

using numerics::kI;

ComplexMatrix krein_form(int l) {
  ComplexMatrix g = ComplexMatrix::Zero(2 * l, 2 * l);
  g.topRightCorner(l, l) = -kI * ComplexMatrix::Identity(l, l);
  g.bottomLeftCorner(l, l) = kI * ComplexMatrix::Identity(l, l);
  return g;
}

ComplexMatrix reference_form(int l) {
  ComplexMatrix j = ComplexMatrix::Identity(2 * l, 2 * l);
  j.bottomRightCorner(l, l) *= -1.0;
  return j;
}

ComplexMatrix cayley_matrix(int l) {
  const ComplexMatrix id = ComplexMatrix::Identity(l, l);
  ComplexMatrix c(2 * l, 2 * l);
  c << id, -kI * id, id, kI * id;
  return c / std::sqrt(2.0);
}

TransferMatrix transfer_matrix(const ComplexMatrix& a, const ComplexMatrix& b, Complex z) {
  const auto l = a.rows();
  if (a.cols() != l || b.rows() != l || b.cols() != l) {
    throw Error(ErrorCode::InvalidArgument, "hopping and onsite must be square of equal size");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(l, l);
  const ComplexMatrix a_inv = numerics::solve(a, id);
  ComplexMatrix t = ComplexMatrix::Zero(2 * l, 2 * l);
  t.topLeftCorner(l, l) = (z * id - b) * a_inv;
  t.topRightCorner(l, l) = -a.adjoint();
  t.bottomLeftCorner(l, l) = a_inv;
  return {t, z, a, b};
}

ComplexMatrix propagate(std::span<const TransferMatrix> ts, const ComplexMatrix& phi0) {
  ComplexMatrix phi = phi0;
  for (const auto& t : ts) {
    if (t.matrix.cols() != phi.rows()) {
      throw Error(ErrorCode::InvalidArgument, "frame and transfer matrix sizes differ");
    }
    phi = t.matrix * phi;
  }
  return phi;
}

GUnitarySpectrum classify_spectrum(const TransferMatrix& t, double circle_tol, double sig_tol) {
  const ComplexMatrix& m = t.matrix;
  const int l = int(m.rows() / 2);
  const auto ed = numerics::eigen(m);
  const double scale = std::max(1.0, numerics::spectral_norm(m));
  const ComplexMatrix g = krein_form(l);

  std::map<int, std::vector<int>> members;
  for (int i = 0; i < int(ed.eigenvalues.size()); ++i) members[ed.cluster[i]].push_back(i);

  GUnitarySpectrum out;
  for (const auto& [id, idx] : members) {
    SpectralCluster c;
    Complex mean = 0.0;
    for (int i : idx) mean += ed.eigenvalues[i];
    mean /= double(idx.size());
    double radius = 0.0;
    for (int i : idx) radius = std::max(radius, std::abs(ed.eigenvalues[i] - mean));
    c.eigenvalue = mean;
    c.defective = ed.defective[idx.front()];
    if (idx.size() == 1) {
      c.eigenvectors = ed.eigenvectors.col(idx.front());
    } else {
      const double r = std::max(2.0 * radius, 10.0 * numerics::kClusterTol * scale);
      c.eigenvectors = numerics::invariant_subspace(
          m, [&](Complex x) { return std::abs(x - mean) <= r; });
    }
    const double dist = std::abs(mean) - 1.0;
    const int mult = int(idx.size());
    if (std::abs(dist) <= circle_tol) {
      c.location = CircleClass::on_circle;
      ComplexMatrix q = c.eigenvectors.adjoint() * g * c.eigenvectors;
      q = (q + q.adjoint()).eval() / 2.0;
      const auto h = numerics::hermitian_eigen(q);
      double smallest = HUGE_VAL;
      for (int i = 0; i < h.eigenvalues.size(); ++i) {
        const double e = h.eigenvalues[i];
        smallest = std::min(smallest, std::abs(e));
        if (e > sig_tol) ++c.nu_plus;
        if (e < -sig_tol) ++c.nu_minus;
      }
      if (smallest <= sig_tol && !c.defective) {
        throw Error(ErrorCode::AmbiguousSignature,
                    "signature of an on-circle eigenvalue is numerically undetermined", smallest);
      }
      out.on_circle += mult;
    } else if (dist < 0) {
      c.location = CircleClass::inside;
      out.inside += mult;
    } else {
      c.location = CircleClass::outside;
      out.outside += mult;
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

ComplexMatrix EllipticNormalForm::psi() const {
  ComplexMatrix p(psi_plus.rows(), psi_plus.cols() + psi_minus.cols());
  p << psi_plus, psi_minus;
  return p;
}

ComplexMatrix EllipticNormalForm::psi_vee() const { return n.leftCols(n.cols() / 2); }

ComplexMatrix EllipticNormalForm::psi_wedge() const { return n.rightCols(n.cols() / 2); }

EllipticNormalForm elliptic_normal_form(const TransferMatrix& t, double circle_tol) {
  const int l = int(t.matrix.rows() / 2);
  const auto spec = classify_spectrum(t, circle_tol);
  std::ostringstream bad;
  double worst = 0.0;
  for (const auto& c : spec.clusters) {
    if (c.location != CircleClass::on_circle || !c.definite()) {
      bad << ' ' << c.eigenvalue;
      worst = std::max(worst, std::abs(std::abs(c.eigenvalue) - 1.0));
    }
  }
  if (!bad.str().empty()) {
    throw Error(ErrorCode::NotPerfectlyConducting,
                "transfer matrix not elliptic and definite at eigenvalues" + bad.str(), worst);
  }

  auto clusters = spec.clusters;
  std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    return std::arg(a.eigenvalue) < std::arg(b.eigenvalue);
  });
  const ComplexMatrix g = krein_form(l);
  std::vector<ComplexMatrix> plus, minus;
  EllipticNormalForm nf;
  for (const auto& c : clusters) {
    const ComplexMatrix& v = c.eigenvectors;
    ComplexMatrix q = v.adjoint() * g * v;
    q = (q + q.adjoint()).eval() / 2.0;
    const bool positive = c.nu_plus > 0;
    if (!positive) q = -q;
    // q = L L^*; the columns of V L^{-*} are G-orthonormal (up to the sign).
    Eigen::LLT<ComplexMatrix> llt(q);
    const ComplexMatrix x =
        llt.matrixU().solve(ComplexMatrix::Identity(q.rows(), q.cols()));
    ComplexMatrix frame = v * x;
    if (frame.cols() == l) {
      // Fix the unitary freedom inside the cluster: make the lower block
      // positive Hermitian. For A = 1, B = 0 this is the basis (lambda; 1) c.
      Eigen::JacobiSVD<ComplexMatrix> svd(frame.bottomRows(l),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
      frame = (frame * svd.matrixV() * svd.matrixU().adjoint()).eval();
    }
    for (int j = 0; j < frame.cols(); ++j) {
      (positive ? plus : minus).push_back(frame.col(j));
      (positive ? nf.lambda_plus : nf.lambda_minus).push_back(c.eigenvalue);
    }
  }
  if (int(plus.size()) != l || int(minus.size()) != l) {
    throw Error(ErrorCode::NotPerfectlyConducting, "unbalanced Krein signatures",
                double(plus.size()) - double(minus.size()));
  }
  nf.psi_plus.resize(2 * l, l);
  nf.psi_minus.resize(2 * l, l);
  for (int j = 0; j < l; ++j) {
    nf.psi_plus.col(j) = plus[j];
    nf.psi_minus.col(j) = minus[j];
  }
  nf.n = nf.psi() * cayley_matrix(l);
  return nf;
}

ComplexMatrix mobius(const ComplexMatrix& m, const ComplexMatrix& z) {
  const auto l = z.rows();
  if (m.rows() != 2 * l || m.cols() != 2 * l || z.cols() != l) {
    throw Error(ErrorCode::InvalidArgument, "Moebius matrix must be twice the size of the point");
  }
  const ComplexMatrix num = m.topLeftCorner(l, l) * z + m.topRightCorner(l, l);
  const ComplexMatrix den = m.bottomLeftCorner(l, l) * z + m.bottomRightCorner(l, l);
  try {
    return numerics::solve_right(num, den);
  } catch (const Error& e) {
    throw Error(ErrorCode::MoebiusUndefined, "cZ + d is singular", e.value());
  }
}

ComplexMatrix stereographic(const ComplexMatrix& phi) {
  const auto l = phi.cols();
  if (phi.rows() != 2 * l) throw Error(ErrorCode::InvalidArgument, "frame must be 2L x L");
  const ComplexMatrix a = phi.topRows(l);
  const ComplexMatrix b = phi.bottomRows(l);
  try {
    return numerics::solve_right(a - kI * b, a + kI * b);
  } catch (const Error& e) {
    throw Error(ErrorCode::StereoUndefined, "a + ib is singular", e.value());
  }
}

double lagrangian_residual(const ComplexMatrix& phi) {
  const int l = int(phi.rows() / 2);
  const double norm = numerics::spectral_norm(phi);
  if (norm == 0.0) return 0.0;
  return numerics::spectral_norm(phi.adjoint() * krein_form(l) * phi) / (norm * norm);
}

ComplexMatrix frame_angles(const ComplexMatrix& phi, const EllipticNormalForm& nf,
                           double lagrangian_tol) {
  const int l = int(phi.cols());
  if (phi.rows() != nf.n.rows() || phi.rows() != 2 * l) {
    throw Error(ErrorCode::InvalidArgument, "frame and normal form sizes differ");
  }
  const double res = lagrangian_residual(phi);
  if (res > lagrangian_tol) {
    throw Error(ErrorCode::NotLagrangian, "frame does not span a G-Lagrangian subspace", res);
  }
  // N^{-1} = G N^* G for G-unitary N.
  const ComplexMatrix g = krein_form(l);
  const ComplexMatrix coords = g * nf.n.adjoint() * g * phi;
  return stereographic(coords);
}

}  // namespace topo::krein
