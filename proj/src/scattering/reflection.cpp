#include <cmath>

#include "topo/error.hpp"
#include "topo/greens/greens.hpp"
#include "topo/scattering/scattering.hpp"
#include "topo/support/parallel.hpp"

namespace topo::scattering {

using numerics::kI;

ComplexMatrix insulator_frame(const ComplexMatrix& coupling, const ComplexMatrix& g_ins) {
  const auto l = coupling.rows();
  ComplexMatrix phi(2 * l, l);
  phi.topRows(l) = coupling * g_ins;
  phi.bottomRows(l) = -numerics::solve(coupling.adjoint(), ComplexMatrix::Identity(l, l));
  return phi;
}

ReflectionRoutes reflection_routes(const ScatteringSystem& sys, const ContinuedFrames& wire,
                                   Complex z, std::span<const double> k) {
  const int l = sys.wire.fiber_dim();
  const ComplexMatrix& a = sys.wire.hopping;
  ReflectionRoutes r;
  r.wire = wire;
  r.g_ins = greens::green_transfer(sys.insulator, z, k).matrix;

  // Route 1: Moebius action of conj(C) N^{-1} C^T on cayley(A G A^*).
  const ComplexMatrix c = krein::cayley_matrix(l);
  const ComplexMatrix n_inv = numerics::solve(wire.n, ComplexMatrix::Identity(2 * l, 2 * l));
  const ComplexMatrix m = c.conjugate() * n_inv * c.transpose();
  r.moebius = krein::mobius(m, greens::cayley(a * r.g_ins * a.adjoint()));

  // Route 2: coordinates of Phi in the wire frames.
  r.phi = insulator_frame(a, r.g_ins);
  ComplexMatrix psi(2 * l, 2 * l);
  psi << wire.psi_plus, wire.psi_minus;
  const ComplexMatrix w = numerics::solve(psi, r.phi);
  r.w_plus = w.topRows(l);
  r.w_minus = w.bottomRows(l);
  try {
    r.frames = numerics::solve_right(r.w_minus, r.w_plus);
  } catch (const Error& e) {
    throw Error(ErrorCode::ReflectionUndefined, "incoming amplitudes are degenerate", e.value());
  }
  r.route_difference = (r.moebius - r.frames).cwiseAbs().maxCoeff();
  return r;
}

ReflectionRoutes reflection_routes(const ScatteringSystem& sys, Complex z,
                                   std::span<const double> k) {
  sys.validate();
  const auto channels = wire_channels(sys.wire, z.real());
  return reflection_routes(sys, continue_frames(sys.wire, channels, z), z, k);
}

ComplexMatrix reflection_matrix(const ScatteringSystem& sys, Complex z, std::span<const double> k) {
  return reflection_routes(sys, z, k).moebius;
}

ComplexMatrix reflection_simple(const ComplexMatrix& g_wire, const ComplexMatrix& g_ins) {
  try {
    return numerics::solve_right(g_wire - g_ins, g_wire + g_ins);
  } catch (const Error& e) {
    throw Error(ErrorCode::ReflectionUndefined, "G_wire + G_ins is singular", e.value());
  }
}

double matching_residual(const ReflectionRoutes& r) {
  const ComplexMatrix lhs = r.wire.psi_plus + r.wire.psi_minus * r.moebius;
  const ComplexMatrix rhs = r.phi * numerics::solve(r.w_plus, ComplexMatrix::Identity(
                                                                  r.w_plus.rows(), r.w_plus.cols()));
  return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff());
}

double schroedinger_residual(const ScatteringSystem& sys, double energy, std::span<const double> k,
                             int wire_layers, int insulator_layers) {
  if (wire_layers < 2 || insulator_layers < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two layers on each side");
  }
  const int l = sys.wire.fiber_dim();
  const auto r = reflection_routes(sys, energy, k);
  const auto t = krein::transfer_matrix(sys.wire.hopping, sys.wire.onsite, energy).matrix;
  const ComplexMatrix t_inv = numerics::solve(t, ComplexMatrix::Identity(2 * l, 2 * l));
  constexpr int kDepth = 200;
  const ComplexMatrix g_column = [&] {
    const ComplexMatrix h = model::half_space_fiber(sys.insulator, k, kDepth);
    return numerics::solve(h - energy * ComplexMatrix::Identity(h.rows(), h.cols()),
                           ComplexMatrix::Identity(h.rows(), l));
  }();
  const ComplexMatrix h = model::scattering_fiber(sys, k, wire_layers, insulator_layers);
  const int total = wire_layers + insulator_layers;
  const ComplexMatrix c = numerics::solve(r.w_plus, ComplexMatrix::Identity(l, l));

  double worst = 0.0;
  for (int j = 0; j < l; ++j) {
    Eigen::VectorXcd phi(total * l);
    // Wire: incoming plus reflected wave, Phi_n = (A phi_{n+1}; phi_n).
    Eigen::VectorXcd state = r.wire.psi_plus.col(j) + r.wire.psi_minus * r.moebius.col(j);
    for (int s = wire_layers - 1; s >= 0; --s) {
      phi.segment(s * l, l) = state.tail(l);
      state = t_inv * state;
    }
    // Insulator: columns of the resolvent, weighted by W_+^{-1}.
    for (int n = 0; n < insulator_layers; ++n) {
      phi.segment((wire_layers + n) * l, l) = g_column.middleRows(n * l, l) * c.col(j);
    }
    const Eigen::VectorXcd res = h * phi - energy * phi;
    const double scale = phi.cwiseAbs().maxCoeff();
    const auto interior = res.segment(l, (total - 2) * l);
    worst = std::max(worst, interior.cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

invariants::UnitaryField reflection_field(const ScatteringSystem& sys, Complex z,
                                          const model::MomentumGrid& grid, int jobs) {
  sys.validate();
  if (grid.dim() != sys.insulator.boundary_dim()) {
    throw Error(ErrorCode::InvalidArgument, "boundary grid must cover the (d-1)-torus");
  }
  const auto channels = wire_channels(sys.wire, z.real());
  const auto frames = continue_frames(sys.wire, channels, z);
  invariants::UnitaryField f{grid, std::vector<ComplexMatrix>(grid.size())};
  support::parallel_for(grid.size(), jobs, [&](std::size_t i) {
    f.values[i] = reflection_routes(sys, frames, z, grid.node(i)).moebius;
  });
  return f;
}

Theorem2Report verify_theorem2(const ScatteringSystem& sys, const invariants::TheoremConfig& config) {
  sys.validate();
  const auto& ins = sys.insulator;
  const int d = ins.dimension;
  const auto gap = greens::bulk_gap(ins, config.mu);
  Theorem2Report report;
  report.delta = config.delta > 0.0 ? config.delta : 1e-2 * gap.width();
  const int bulk_points =
      config.bulk_points > 0 ? config.bulk_points : invariants::default_bulk_points(d);
  const int boundary_points =
      config.boundary_points > 0 ? config.boundary_points : invariants::default_boundary_points(d);
  const int jobs = config.boundary.jobs;
  report.bulk = invariants::bulk_chern(ins, config.mu, bulk_points, jobs);
  const model::MomentumGrid grid(d - 1, boundary_points, 0.5);
  const Complex z(config.mu, report.delta);
  invariants::BoundaryOptions options;
  options.jobs = jobs;
  report.boundary = invariants::odd_winding(invariants::boundary_unitary_field(ins, z, grid, options));
  report.reflection = invariants::odd_winding(reflection_field(sys, z, grid, jobs));
  report.pass = report.bulk.converged() && report.boundary.converged() &&
                report.reflection.converged() &&
                report.reflection.rounded == report.boundary.rounded &&
                report.bulk.rounded == -report.reflection.rounded;
  return report;
}

}  // namespace topo::scattering
