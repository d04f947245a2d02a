#include <cmath>
#include <numbers>

#include "topo/error.hpp"
#include "topo/invariants/invariants.hpp"
#include "topo/kernels/matrix_batch.hpp"
#include "topo/support/parallel.hpp"

namespace topo::invariants {

using numerics::Complex;

namespace {

constexpr double kMaxPhaseStep = 0.9 * std::numbers::pi;
constexpr double kUnconvergedDistance = 0.1;

// Periodic spectral differentiation weights along one axis of n points:
// f'(k) = sum over r = 1..n-1 of w[r] f(k + r h).
std::vector<double> spectral_weights(int n, double h) {
  std::vector<double> w(n, 0.0);
  for (int r = 1; r < n; ++r) {
    const double sign = r % 2 ? -1.0 : 1.0;
    w[r] = n % 2 == 0 ? -0.5 * sign / std::tan(r * h / 2.0) : -0.5 * sign / std::sin(r * h / 2.0);
  }
  return w;
}

void check_field(const UnitaryField& v) {
  if (v.values.size() != v.grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "one value per grid node is required");
  }
}

}  // namespace

InvariantResult winding_1d(const UnitaryField& v) {
  check_field(v);
  if (v.grid.dim() != 1) throw Error(ErrorCode::InvalidArgument, "winding_1d needs a 1D grid");
  std::vector<Complex> det(v.values.size());
  for (std::size_t i = 0; i < det.size(); ++i) {
    det[i] = v.values[i].determinant();
    if (!(std::abs(det[i]) > 0.0) || !std::isfinite(std::abs(det[i]))) {
      throw Error(ErrorCode::NotInvertible, "field value is not invertible", double(i));
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < det.size(); ++i) {
    const double step = std::arg(det[v.grid.shifted(i, 0)] / det[i]);
    if (std::abs(step) > kMaxPhaseStep) {
      throw Error(ErrorCode::RefineGrid, "determinant phase jumps by nearly pi on a link", step);
    }
    total += step;
  }
  return make_result(total / (2.0 * std::numbers::pi), {v.grid.points()}, "det_phase",
                     kLatticeTol);
}

InvariantResult winding_3d(const UnitaryField& v, bool strict) {
  check_field(v);
  if (v.grid.dim() != 3) throw Error(ErrorCode::InvalidArgument, "winding_3d needs a 3D grid");
  const auto& g = v.grid;
  const double h = g.spacing();
  const std::size_t n = g.size();
  const auto w = spectral_weights(g.points(), h);
  std::vector<std::vector<ComplexMatrix>> x(3, std::vector<ComplexMatrix>(n));
  support::parallel_for(n, 0, [&](std::size_t i) {
    for (int a = 0; a < 3; ++a) {
      ComplexMatrix d = ComplexMatrix::Zero(v.values[i].rows(), v.values[i].cols());
      for (int r = 1; r < g.points(); ++r) d += w[r] * v.values[g.shifted(i, a, r)];
      x[a][i] = numerics::solve(v.values[i], d);
    }
  });
  // eps^{ijk} tr(X_i X_j X_k) = 3 tr(X_0 [X_1, X_2])
  const auto x12 = kernels::multiply_batch(x[1], x[2]);
  const auto x21 = kernels::multiply_batch(x[2], x[1]);
  Complex total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += (x[0][i].transpose().cwiseProduct(x12[i] - x21[i])).sum();
  }
  const double value =
      -3.0 * total.real() * h * h * h / (24.0 * std::numbers::pi * std::numbers::pi);
  auto r = make_result(value, {g.points(), g.points(), g.points()}, "spectral_difference",
                       kWinding3Tol);
  if (strict && r.distance_to_integer > kUnconvergedDistance) {
    throw Error(ErrorCode::Unconverged, "three-dimensional winding is not near an integer", value);
  }
  return r;
}

InvariantResult odd_winding(const UnitaryField& v, bool strict) {
  if (v.grid.dim() == 1) return winding_1d(v);
  if (v.grid.dim() == 3) return winding_3d(v, strict);
  throw Error(ErrorCode::InvalidArgument, "odd windings are available for d-1 = 1 or 3");
}

}  // namespace topo::invariants
