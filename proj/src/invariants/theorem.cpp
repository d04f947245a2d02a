#include "topo/error.hpp"
#include "topo/invariants/invariants.hpp"

namespace topo::invariants {

int default_bulk_points(int dimension) { return dimension <= 2 ? 64 : 12; }

int default_boundary_points(int dimension) { return dimension <= 2 ? 64 : 16; }

double default_delta(const BlockJacobiModel& model, double mu) {
  return 1e-2 * greens::bulk_gap(model, mu).width();
}

InvariantResult bulk_chern(const BlockJacobiModel& model, double mu, int points, int jobs) {
  const MomentumGrid grid(model.dimension, points, 0.0);
  const auto p = fermi_projection_field(model, mu, grid, jobs);
  if (model.dimension == 2) return chern_2d(p);
  if (model.dimension == 4) return chern_4d(p);
  throw Error(ErrorCode::InvalidArgument, "bulk Chern numbers are available for d = 2 or 4");
}

Theorem1Report verify_theorem1(const BlockJacobiModel& model, const TheoremConfig& config) {
  const int d = model.dimension;
  const auto gap = greens::bulk_gap(model, config.mu);
  Theorem1Report report;
  report.delta = config.delta > 0.0 ? config.delta : 1e-2 * gap.width();
  const int bulk_points = config.bulk_points > 0 ? config.bulk_points : default_bulk_points(d);
  const int boundary_points =
      config.boundary_points > 0 ? config.boundary_points : default_boundary_points(d);
  report.bulk = bulk_chern(model, config.mu, bulk_points, config.boundary.jobs);

  BoundaryOptions options = config.boundary;
  if (options.green.route == greens::GreenRoute::truncated_resolvent && options.green.depth <= 0) {
    options.green.depth = std::max(greens::default_depth(gap.width()), options.strip + 1);
  }
  // Half-spacing offset keeps nodes off high-symmetry momenta.
  const MomentumGrid grid(d - 1, boundary_points, 0.5);
  const auto v = boundary_unitary_field(model, {config.mu, report.delta}, grid, options);
  report.boundary = odd_winding(v);
  report.pass = report.bulk.converged() && report.boundary.converged() &&
                report.bulk.rounded == -report.boundary.rounded;
  return report;
}

}  // namespace topo::invariants
