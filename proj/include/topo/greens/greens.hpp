#pragma once

#include <span>
#include <vector>

#include "topo/model/model.hpp"

namespace topo::greens {

using numerics::Complex;
using numerics::ComplexMatrix;
using model::BlockJacobiModel;

enum class GreenRoute { truncated_resolvent, transfer_subspace };

struct BoundaryGreen {
  ComplexMatrix matrix;  // N L x N L
  Complex z;
  std::vector<double> k;
  int strip = 1;
  GreenRoute route = GreenRoute::transfer_subspace;
};

/// Top-left N L block of (H_M(k) - z)^{-1} for the depth-M Dirichlet truncation.
BoundaryGreen green_truncated(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                              int strip, int depth);

/// Boundary Green matrix of the half-space made of layers first_layer, first_layer+1, ...
/// from the contracting subspace of the one-period transfer product.
BoundaryGreen green_transfer(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                             int first_layer = 1, double circle_tol = 1e-8);

/// Strip Green matrix of width N by the transfer route: the first N layers
/// exactly, the rest of the half-space folded in as a self-energy.
BoundaryGreen green_strip(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                          int strip, double circle_tol = 1e-8);

/// (G - i)(G + i)^{-1}.
ComplexMatrix cayley(const ComplexMatrix& g);
/// Inverse map i (1 + V)(1 - V)^{-1}.
ComplexMatrix cayley_inverse(const ComplexMatrix& v);

struct GreenOptions {
  GreenRoute route = GreenRoute::transfer_subspace;
  int depth = 0;  // truncated route only; 0 selects the default depth
  double circle_tol = 1e-8;
};

/// (2 eps G_N - i)(2 eps G_N + i)^{-1}.
ComplexMatrix boundary_unitary(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                               int strip = 1, double epsilon = 0.5,
                               const GreenOptions& options = {});

struct Gap {
  double lower = 0.0;  // top of the bands below mu
  double upper = 0.0;  // bottom of the bands above mu
  double width() const { return upper - lower; }
  bool contains(double e) const { return lower < e && e < upper; }
  /// Interval with `fraction` of the width removed at each end.
  Gap shrunk(double fraction) const;
};

/// Spectral gap of the bulk fibers around mu, scanned on a uniform d-dimensional
/// grid. Throws GapViolated when an eigenvalue lies within 1e-8 of mu or when mu
/// sits inside the range swept by one band.
Gap bulk_gap(const BlockJacobiModel& model, double mu, int points_per_axis = 24);

/// max(50, ceil(40 / gap)).
int default_depth(double gap_width);

/// Depth-D truncation used for the exponential map before compressing to the
/// first M layers.
int exp_map_depth(int strip_layers);

/// Compression to layers 1..M of exp(2 pi i f(H_D(k))) where f is the quintic
/// smoothstep across `gap` and D = exp_map_depth(M). Throws InvalidGap when a
/// bulk band enters the declared gap at this k.
ComplexMatrix exp_map_unitary(const BlockJacobiModel& model, std::span<const double> k, int layers,
                              const Gap& gap, double mu);

/// 6 s^5 - 15 s^4 + 10 s^3 of the position of e across the gap, clamped to [0, 1].
double smoothstep(double e, const Gap& gap);

}  // namespace topo::greens
