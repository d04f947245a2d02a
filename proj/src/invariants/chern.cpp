#include <cmath>
#include <numbers>

#include "topo/error.hpp"
#include "topo/invariants/invariants.hpp"
#include "topo/kernels/matrix_batch.hpp"
#include "topo/support/parallel.hpp"

namespace topo::invariants {

using numerics::Complex;
using kernels::multiply_batch;

namespace {

constexpr double kMaxPlaquettePhase = 0.9 * std::numbers::pi;
constexpr double kMinLinkSingularValue = 1e-6;

std::vector<ComplexMatrix> gather(const std::vector<ComplexMatrix>& field, const MomentumGrid& g,
                                  int axis) {
  std::vector<ComplexMatrix> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = field[g.shifted(i, axis)];
  return out;
}

// Unitary part of u(k)^* u(k + e_axis) on every node.
std::vector<ComplexMatrix> links(const ProjectionField& p, int axis) {
  auto overlaps = multiply_batch(p.frames, gather(p.frames, p.grid, axis), true, false);
  for (std::size_t i = 0; i < overlaps.size(); ++i) {
    if (p.rank == 0) continue;
    Eigen::JacobiSVD<ComplexMatrix> svd(overlaps[i], Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < kMinLinkSingularValue) {
      throw Error(ErrorCode::RefineGrid, "neighbouring occupied frames are nearly orthogonal",
                  svd.singularValues().minCoeff());
    }
    overlaps[i] = svd.matrixU() * svd.matrixV().adjoint();
  }
  return overlaps;
}

// W = U_a(k) U_b(k + a) U_a(k + b)^* U_b(k)^*, expressed in the frame at k.
std::vector<ComplexMatrix> plaquettes(const std::vector<ComplexMatrix>& ua,
                                      const std::vector<ComplexMatrix>& ub, const MomentumGrid& g,
                                      int a, int b) {
  const auto first = multiply_batch(ua, gather(ub, g, a));
  const auto second = multiply_batch(ub, gather(ua, g, b));
  return multiply_batch(first, second, false, true);
}

// Principal logarithm of a unitary matrix.
ComplexMatrix unitary_log(const ComplexMatrix& w, double& max_phase) {
  if (w.rows() == 0) return w;
  Eigen::ComplexSchur<ComplexMatrix> schur(w);
  const ComplexMatrix& t = schur.matrixT();
  ComplexMatrix d = ComplexMatrix::Zero(w.rows(), w.cols());
  for (Eigen::Index j = 0; j < w.rows(); ++j) {
    const double phase = std::arg(t(j, j));
    max_phase = std::max(max_phase, std::abs(phase));
    d(j, j) = Complex(0.0, phase);
  }
  return schur.matrixU() * d * schur.matrixU().adjoint();
}

// U(k) X(k + e_axis) U(k)^*: moves a field from the next node into the frame at k.
std::vector<ComplexMatrix> transport_up(const std::vector<ComplexMatrix>& x,
                                        const std::vector<ComplexMatrix>& u,
                                        const MomentumGrid& g, int axis) {
  return multiply_batch(multiply_batch(u, gather(x, g, axis)), u, false, true);
}

// U(k - e)^* X(k - e) U(k - e): moves a field from the previous node.
std::vector<ComplexMatrix> transport_down(const std::vector<ComplexMatrix>& x,
                                          const std::vector<ComplexMatrix>& u,
                                          const MomentumGrid& g, int axis) {
  std::vector<ComplexMatrix> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t j = g.shifted(i, axis, -1);
    out[i] = u[j].adjoint() * x[j] * u[j];
  }
  return out;
}

// Undoes the averaging of a face over its own extent along `axis`:
// F - (F(+1) - 2F + F(-1)) / 24.
std::vector<ComplexMatrix> sharpen(const std::vector<ComplexMatrix>& f,
                                   const std::vector<ComplexMatrix>& u, const MomentumGrid& g,
                                   int axis) {
  const auto up = transport_up(f, u, g, axis);
  const auto down = transport_down(f, u, g, axis);
  std::vector<ComplexMatrix> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = (26.0 * f[i] - up[i] - down[i]) / 24.0;
  }
  return out;
}

// Four point interpolation to the midpoint between a node and its successor.
std::vector<ComplexMatrix> midpoint(const std::vector<ComplexMatrix>& f,
                                    const std::vector<ComplexMatrix>& u, const MomentumGrid& g,
                                    int axis) {
  const auto up = transport_up(f, u, g, axis);
  const auto up2 = transport_up(up, u, g, axis);
  const auto down = transport_down(f, u, g, axis);
  std::vector<ComplexMatrix> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = (9.0 * (f[i] + up[i]) - down[i] - up2[i]) / 16.0;
  }
  return out;
}

std::vector<int> grid_dims(const MomentumGrid& g) { return std::vector<int>(g.dim(), g.points()); }

}  // namespace

InvariantResult chern_2d(const ProjectionField& p) {
  if (p.grid.dim() != 2) throw Error(ErrorCode::InvalidArgument, "chern_2d needs a 2D grid");
  const auto w = plaquettes(links(p, 0), links(p, 1), p.grid, 0, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double phase = p.rank == 0 ? 0.0 : std::arg(w[i].determinant());
    if (std::abs(phase) > kMaxPlaquettePhase) {
      throw Error(ErrorCode::RefineGrid, "plaquette phase close to pi", phase);
    }
    total += phase;
  }
  return make_result(-total / (2.0 * std::numbers::pi), grid_dims(p.grid), "lattice_plaquette",
                     kLatticeTol);
}

InvariantResult chern_4d(const ProjectionField& p) {
  if (p.grid.dim() != 4) throw Error(ErrorCode::InvalidArgument, "chern_4d needs a 4D grid");
  std::vector<std::vector<ComplexMatrix>> u(4);
  for (int a = 0; a < 4; ++a) u[a] = links(p, a);
  // Field strengths of the six coordinate planes, ordered 01 02 03 12 13 23,
  // all carried to the centre of each 4-cell in the frame of its base corner.
  // Both stencils are exact to fourth order, so the sum converges like h^4.
  constexpr int planes[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::vector<std::vector<ComplexMatrix>> f(6);
  double max_phase = 0.0;
  for (int q = 0; q < 6; ++q) {
    const int a = planes[q][0], b = planes[q][1];
    auto w = plaquettes(u[a], u[b], p.grid, a, b);
    std::vector<ComplexMatrix> face(w.size());
    std::vector<double> phase(w.size(), 0.0);
    support::parallel_for(w.size(), 0, [&](std::size_t i) { face[i] = unitary_log(w[i], phase[i]); });
    for (double x : phase) max_phase = std::max(max_phase, x);
    for (int c = 0; c < 4; ++c) {
      face = (c == a || c == b) ? sharpen(face, u[c], p.grid, c) : midpoint(face, u[c], p.grid, c);
    }
    f[q] = std::move(face);
  }
  if (max_phase > kMaxPlaquettePhase) {
    throw Error(ErrorCode::RefineGrid, "plaquette phase close to pi", max_phase);
  }
  // eps^{ijkl} tr(F_ij F_kl) = 8 [tr(F01 F23) - tr(F02 F13) + tr(F03 F12)]
  const auto p1 = multiply_batch(f[0], f[5]);
  const auto p2 = multiply_batch(f[1], f[4]);
  const auto p3 = multiply_batch(f[2], f[3]);
  Complex total = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) total += p1[i].trace() - p2[i].trace() + p3[i].trace();
  const double value = -8.0 * total.real() / (32.0 * std::numbers::pi * std::numbers::pi);
  return make_result(value, grid_dims(p.grid), "lattice_field_strength", kWinding3Tol);
}

}  // namespace topo::invariants
