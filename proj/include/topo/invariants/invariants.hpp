#pragma once

#include <string>
#include <vector>

#include "topo/greens/greens.hpp"
#include "topo/model/model.hpp"

namespace topo::invariants {

using numerics::ComplexMatrix;
using model::BlockJacobiModel;
using model::MomentumGrid;

/// Fermi projection over a grid of the d-torus, stored as orthonormal frames
/// of the occupied subspace: P(k) = U(k) U(k)^*.
struct ProjectionField {
  MomentumGrid grid;
  int fiber_dim = 0;
  int rank = 0;
  std::vector<ComplexMatrix> frames;

  ComplexMatrix projector(std::size_t node) const;
};

/// Occupied frames of the bulk fiber below mu. Throws GapViolated when an
/// eigenvalue is within 1e-8 of mu, and when the rank changes across the grid.
ProjectionField fermi_projection_field(const BlockJacobiModel& model, double mu,
                                       const MomentumGrid& grid, int jobs = 0);

/// Validates frames (orthonormal, constant rank) and wraps them.
ProjectionField projection_field(const MomentumGrid& grid, std::vector<ComplexMatrix> frames);

struct InvariantResult {
  double value = 0.0;
  long rounded = 0;
  double distance_to_integer = 0.0;
  std::vector<int> grid;
  std::string method;
  double tolerance = 0.0;

  bool converged() const { return distance_to_integer < tolerance; }
};

InvariantResult make_result(double value, std::vector<int> grid, std::string method,
                            double tolerance);

inline constexpr double kLatticeTol = 1e-9;
inline constexpr double kWinding3Tol = 0.05;

/// Lattice field-strength Chern number from plaquette products of link
/// variables u(k)^* u(k + e_mu) (unitarized). Ch_2 = -(1/2pi) sum arg det W.
/// Throws RefineGrid when a plaquette phase is close to +-pi.
InvariantResult chern_2d(const ProjectionField& p);

/// Second Chern number from the plaquette field strengths F_ij = log W_ij at
/// every node, Ch_4 = -(1/32 pi^2) sum eps^{ijkl} tr(F_ij F_kl).
InvariantResult chern_4d(const ProjectionField& p);

/// Field of invertible matrices over a boundary grid.
struct UnitaryField {
  MomentumGrid grid;
  std::vector<ComplexMatrix> values;
};

/// Sum of det phase increments over the links of the circle, over 2 pi.
/// Throws RefineGrid when an increment exceeds 0.9 pi.
InvariantResult winding_1d(const UnitaryField& v);

/// -(1/24 pi^2) sum eps^{ijk} tr(X_i X_j X_k) h^3 with X_i = V^{-1} D_i V and
/// periodic spectral derivatives D_i. This is minus the degree for the
/// orientation of SU(2) in which 1 + i x.sigma is positive. Throws Unconverged
/// when the value is more than 0.1 from an integer, unless `strict` is false.
InvariantResult winding_3d(const UnitaryField& v, bool strict = true);

/// winding_1d or winding_3d by grid dimension.
InvariantResult odd_winding(const UnitaryField& v, bool strict = true);

struct BoundaryOptions {
  int strip = 1;
  double epsilon = 0.5;
  greens::GreenOptions green;
  int jobs = 0;
};

/// V(k) = boundary_unitary(model, z, k, ...) on every grid node.
UnitaryField boundary_unitary_field(const BlockJacobiModel& model, numerics::Complex z,
                                    const MomentumGrid& grid, const BoundaryOptions& options = {});

/// Exponential-map unitary on every node of a 1D boundary grid.
UnitaryField exp_map_field(const BlockJacobiModel& model, const MomentumGrid& grid, int layers,
                           const greens::Gap& gap, double mu, int jobs = 0);

struct TheoremConfig {
  double mu = 0.0;
  double delta = 0.0;      // 0 selects 1e-2 times the bulk gap
  int bulk_points = 0;     // 0 selects 64 (d=2) or 12 (d=4)
  int boundary_points = 0; // 0 selects 64 (d=2) or 16 (d=4)
  BoundaryOptions boundary;
};

struct Theorem1Report {
  InvariantResult bulk;      // Ch_d(P)
  InvariantResult boundary;  // Ch_{d-1}(V)
  double delta = 0.0;
  bool pass = false;
};

/// Checks Ch_d(P) = -Ch_{d-1}(V^{mu + i delta}) as integers.
Theorem1Report verify_theorem1(const BlockJacobiModel& model, const TheoremConfig& config);

/// Chern number of the bulk Fermi projection on a points^d grid.
InvariantResult bulk_chern(const BlockJacobiModel& model, double mu, int points, int jobs = 0);

/// Resolved defaults for a model.
double default_delta(const BlockJacobiModel& model, double mu);
int default_bulk_points(int dimension);
int default_boundary_points(int dimension);

}  // namespace topo::invariants
