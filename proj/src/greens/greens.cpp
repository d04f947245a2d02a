#include "topo/greens/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "topo/error.hpp"
#include "topo/krein/krein.hpp"

namespace topo::greens {

using numerics::kI;

BoundaryGreen green_truncated(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                              int strip, int depth) {
  if (strip < 1 || depth < strip) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= strip <= depth");
  }
  const int l = model.fiber_dim;
  const ComplexMatrix h = model::half_space_fiber(model, k, depth);
  if (std::abs(z.imag()) < 1e-10) {
    const auto spec = numerics::hermitian_eigen(h);
    const double dist = (spec.eigenvalues.array() - z.real()).abs().minCoeff();
    if (dist < 1e-10) {
      throw Error(ErrorCode::ResolventSingular, "z is an eigenvalue of the truncated fiber", dist);
    }
  }
  const ComplexMatrix rhs = ComplexMatrix::Identity(h.rows(), strip * l);
  ComplexMatrix x;
  try {
    x = numerics::solve(h - z * ComplexMatrix::Identity(h.rows(), h.cols()), rhs);
  } catch (const Error& e) {
    throw Error(ErrorCode::ResolventSingular, "truncated resolvent is singular", e.value());
  }
  return {x.topRows(strip * l), z, {k.begin(), k.end()}, strip, GreenRoute::truncated_resolvent};
}

BoundaryGreen green_transfer(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                             int first_layer, double circle_tol) {
  if (first_layer < 1) throw Error(ErrorCode::InvalidArgument, "layers are counted from 1");
  const int l = model.fiber_dim;
  const int p = model.period();
  // One period of transfer matrices starting right after the boundary layer.
  ComplexMatrix mono = ComplexMatrix::Identity(2 * l, 2 * l);
  for (int n = first_layer + 1; n <= first_layer + p; ++n) {
    mono = krein::transfer_matrix(model.hopping(n, k), model.onsite(n, k), z).matrix * mono;
  }
  std::vector<double> moduli;
  const Eigen::ComplexEigenSolver<ComplexMatrix> solver(mono, false);
  for (const auto& x : solver.eigenvalues()) {
    moduli.push_back(std::abs(x));
  }
  std::sort(moduli.begin(), moduli.end());
  const double in = moduli[l - 1];
  const double out = moduli[l];
  if (!(in < 1.0 - circle_tol && out > 1.0 + circle_tol)) {
    throw Error(ErrorCode::NoSpectralSplit,
                "transfer product has no L-dimensional contracting subspace",
                std::min(std::abs(in - 1.0), std::abs(out - 1.0)));
  }
  const double threshold = std::sqrt(in * out);
  const auto schur =
      numerics::ordered_schur(mono, [&](Complex x) { return std::abs(x) < threshold; });
  if (schur.leading != l) {
    throw Error(ErrorCode::NoSpectralSplit, "contracting subspace has the wrong dimension",
                double(schur.leading));
  }
  const ComplexMatrix a = schur.q.topLeftCorner(l, l);
  const ComplexMatrix b = schur.q.bottomLeftCorner(l, l);
  // The boundary layer sees the fictitious initial condition (G; -1) with unit
  // hopping, so (z - B) G + 1 and G must lie on the contracting subspace.
  const ComplexMatrix shifted = z * ComplexMatrix::Identity(l, l) - model.onsite(first_layer, k);
  ComplexMatrix g;
  try {
    g = numerics::solve_right(b, a - shifted * b);
  } catch (const Error& e) {
    throw Error(ErrorCode::NoSpectralSplit, "contracting subspace is not a graph", e.value());
  }
  return {g, z, {k.begin(), k.end()}, 1, GreenRoute::transfer_subspace};
}

BoundaryGreen green_strip(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                          int strip, double circle_tol) {
  if (strip < 1) throw Error(ErrorCode::InvalidArgument, "strip width must be positive");
  if (strip == 1) return green_transfer(model, z, k, 1, circle_tol);
  const int l = model.fiber_dim;
  const ComplexMatrix tail = green_transfer(model, z, k, strip + 1, circle_tol).matrix;
  const ComplexMatrix a = model.hopping(strip + 1, k);
  ComplexMatrix h = model::half_space_fiber(model, k, strip);
  h -= z * ComplexMatrix::Identity(h.rows(), h.cols());
  h.bottomRightCorner(l, l) -= a * tail * a.adjoint();
  ComplexMatrix g;
  try {
    g = numerics::solve(h, ComplexMatrix::Identity(h.rows(), h.cols()));
  } catch (const Error& e) {
    throw Error(ErrorCode::ResolventSingular, "strip resolvent is singular", e.value());
  }
  return {g, z, {k.begin(), k.end()}, strip, GreenRoute::transfer_subspace};
}

ComplexMatrix cayley(const ComplexMatrix& g) {
  const ComplexMatrix id = ComplexMatrix::Identity(g.rows(), g.cols());
  try {
    return numerics::solve_right(g - kI * id, g + kI * id);
  } catch (const Error& e) {
    throw Error(ErrorCode::CayleyUndefined, "G + i is singular", e.value());
  }
}

ComplexMatrix cayley_inverse(const ComplexMatrix& v) {
  const ComplexMatrix id = ComplexMatrix::Identity(v.rows(), v.cols());
  try {
    return kI * numerics::solve_right(id + v, id - v);
  } catch (const Error& e) {
    throw Error(ErrorCode::CayleyUndefined, "1 - V is singular", e.value());
  }
}

ComplexMatrix boundary_unitary(const BlockJacobiModel& model, Complex z, std::span<const double> k,
                               int strip, double epsilon, const GreenOptions& options) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  ComplexMatrix g;
  if (options.route == GreenRoute::transfer_subspace) {
    g = green_strip(model, z, k, strip, options.circle_tol).matrix;
  } else {
    const int depth = options.depth > 0
                          ? options.depth
                          : std::max(default_depth(bulk_gap(model, z.real()).width()), strip + 1);
    g = green_truncated(model, z, k, strip, depth).matrix;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(g.rows(), g.cols());
  ComplexMatrix v;
  try {
    v = numerics::solve_right(2.0 * epsilon * g - kI * id, 2.0 * epsilon * g + kI * id);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotInvertible, "2 eps G + i is singular", e.value());
  }
  const double smin = numerics::min_singular_value(v);
  if (smin < 1e-12) {
    throw Error(ErrorCode::NotInvertible, "boundary unitary is not invertible", smin);
  }
  return v;
}

Gap Gap::shrunk(double fraction) const {
  const double w = width() * fraction;
  return {lower + w, upper - w};
}

Gap bulk_gap(const BlockJacobiModel& model, double mu, int points_per_axis) {
  if (points_per_axis <= 0) points_per_axis = model.dimension <= 2 ? 64 : 12;
  const model::MomentumGrid grid(model.dimension, points_per_axis, 0.0);
  double below = -HUGE_VAL;
  double above = HUGE_VAL;
  // Band j (sorted eigenvalues) sweeps the interval [lo[j], hi[j]].
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.node(i);
    const auto spec = numerics::hermitian_eigen(model::bulk_fiber(model, k));
    lo.resize(spec.eigenvalues.size(), HUGE_VAL);
    hi.resize(spec.eigenvalues.size(), -HUGE_VAL);
    for (int j = 0; j < spec.eigenvalues.size(); ++j) {
      const double e = spec.eigenvalues[j];
      if (std::abs(e - mu) < 1e-8) {
        throw Error(ErrorCode::GapViolated, "bulk eigenvalue at the Fermi level", e);
      }
      lo[j] = std::min(lo[j], e);
      hi[j] = std::max(hi[j], e);
      if (e < mu) below = std::max(below, e);
      if (e > mu) above = std::min(above, e);
    }
  }
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (lo[j] < mu && mu < hi[j]) {
      throw Error(ErrorCode::GapViolated, "Fermi level inside bulk band " + std::to_string(j),
                  std::min(mu - lo[j], hi[j] - mu));
    }
  }
  if (below == -HUGE_VAL) below = mu - (above - mu);
  if (above == HUGE_VAL) above = mu + (mu - below);
  return {below, above};
}

int default_depth(double gap_width) {
  return std::max(50, int(std::ceil(40.0 / gap_width)));
}

int exp_map_depth(int strip_layers) { return std::max(3 * strip_layers, strip_layers + 60); }

double smoothstep(double e, const Gap& gap) {
  const double s = std::clamp((e - gap.lower) / gap.width(), 0.0, 1.0);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

ComplexMatrix exp_map_unitary(const BlockJacobiModel& model, std::span<const double> k, int layers,
                              const Gap& gap, double mu) {
  if (layers < 1) throw Error(ErrorCode::InvalidArgument, "need at least one layer");
  if (!(gap.width() > 0.0) || !gap.contains(mu)) {
    throw Error(ErrorCode::InvalidGap, "declared gap must be a nonempty interval around mu");
  }
  constexpr int kPerpendicularScan = 64;
  std::vector<double> kb(k.begin(), k.end());
  kb.push_back(0.0);
  for (int j = 0; j < kPerpendicularScan; ++j) {
    kb.back() = 2.0 * std::numbers::pi * j / kPerpendicularScan;
    const auto spec = numerics::hermitian_eigen(model::bulk_fiber(model, kb));
    for (int i = 0; i < spec.eigenvalues.size(); ++i) {
      if (gap.contains(spec.eigenvalues[i])) {
        throw Error(ErrorCode::InvalidGap, "bulk band inside the declared gap",
                    spec.eigenvalues[i]);
      }
    }
  }
  const ComplexMatrix h = model::half_space_fiber(model, k, exp_map_depth(layers));
  const ComplexMatrix u = numerics::hermitian_function(h, [&](double e) {
    return std::exp(2.0 * std::numbers::pi * kI * smoothstep(e, gap));
  });
  const int n = layers * model.fiber_dim;
  return u.topLeftCorner(n, n);
}

}  // namespace topo::greens
