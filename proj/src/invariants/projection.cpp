#include <cmath>

#include "topo/error.hpp"
#include "topo/invariants/invariants.hpp"
#include "topo/support/parallel.hpp"

namespace topo::invariants {

ComplexMatrix ProjectionField::projector(std::size_t node) const {
  return frames[node] * frames[node].adjoint();
}

ProjectionField projection_field(const MomentumGrid& grid, std::vector<ComplexMatrix> frames) {
  if (frames.size() != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "one frame per grid node is required");
  }
  ProjectionField p{grid, int(frames.front().rows()), int(frames.front().cols()), {}};
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& u = frames[i];
    if (u.rows() != p.fiber_dim || u.cols() != p.rank) {
      throw Error(ErrorCode::GapViolated, "projection rank changes across the grid", double(i));
    }
    const double err =
        (u.adjoint() * u - ComplexMatrix::Identity(p.rank, p.rank)).cwiseAbs().maxCoeff();
    if (err > 1e-10) {
      throw Error(ErrorCode::InvalidArgument, "frame is not orthonormal", err);
    }
  }
  p.frames = std::move(frames);
  return p;
}

ProjectionField fermi_projection_field(const BlockJacobiModel& model, double mu,
                                       const MomentumGrid& grid, int jobs) {
  if (grid.dim() != model.dimension) {
    throw Error(ErrorCode::InvalidArgument, "bulk grid must cover the d-torus");
  }
  std::vector<ComplexMatrix> frames(grid.size());
  support::parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const auto spec = numerics::hermitian_eigen(model::bulk_fiber(model, grid.node(i)));
    int rank = 0;
    for (int j = 0; j < spec.eigenvalues.size(); ++j) {
      const double e = spec.eigenvalues[j];
      if (std::abs(e - mu) < 1e-8) {
        throw Error(ErrorCode::GapViolated, "eigenvalue at the Fermi level on node " +
                                                std::to_string(i), double(i));
      }
      if (e < mu) ++rank;
    }
    frames[i] = spec.eigenvectors.leftCols(rank);
  });
  return projection_field(grid, std::move(frames));
}

InvariantResult make_result(double value, std::vector<int> grid, std::string method,
                            double tolerance) {
  InvariantResult r;
  r.value = value;
  r.rounded = std::lround(value);
  r.distance_to_integer = std::abs(value - double(r.rounded));
  r.grid = std::move(grid);
  r.method = std::move(method);
  r.tolerance = tolerance;
  return r;
}

UnitaryField boundary_unitary_field(const BlockJacobiModel& model, numerics::Complex z,
                                    const MomentumGrid& grid, const BoundaryOptions& options) {
  if (grid.dim() != model.boundary_dim()) {
    throw Error(ErrorCode::InvalidArgument, "boundary grid must cover the (d-1)-torus");
  }
  UnitaryField f{grid, std::vector<ComplexMatrix>(grid.size())};
  support::parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
    f.values[i] = greens::boundary_unitary(model, z, grid.node(i), options.strip, options.epsilon,
                                           options.green);
  });
  return f;
}

UnitaryField exp_map_field(const BlockJacobiModel& model, const MomentumGrid& grid, int layers,
                           const greens::Gap& gap, double mu, int jobs) {
  if (grid.dim() != model.boundary_dim()) {
    throw Error(ErrorCode::InvalidArgument, "boundary grid must cover the (d-1)-torus");
  }
  UnitaryField f{grid, std::vector<ComplexMatrix>(grid.size())};
  support::parallel_for(grid.size(), jobs, [&](std::size_t i) {
    f.values[i] = greens::exp_map_unitary(model, grid.node(i), layers, gap, mu);
  });
  return f;
}

}  // namespace topo::invariants
