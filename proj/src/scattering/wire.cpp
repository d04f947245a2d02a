#include <cmath>
#include <numbers>

#include "topo/error.hpp"
#include "topo/greens/greens.hpp"
#include "topo/scattering/scattering.hpp"

namespace topo::scattering {

namespace {

std::vector<Complex> transfer_eigenvalues(const WireModel& wire, Complex z) {
  const auto t = krein::transfer_matrix(wire.hopping, wire.onsite, z).matrix;
  const auto ev = Eigen::ComplexEigenSolver<ComplexMatrix>(t, false).eigenvalues();
  return {ev.begin(), ev.end()};
}

Complex nearest(const std::vector<Complex>& candidates, Complex x) {
  Complex best = candidates.front();
  for (const auto& c : candidates) {
    if (std::abs(c - x) < std::abs(best - x)) best = c;
  }
  return best;
}

int phase_velocity_sign(const WireModel& wire, double energy, Complex lambda) {
  const Complex up = nearest(transfer_eigenvalues(wire, energy + kPhaseStep), lambda);
  const Complex down = nearest(transfer_eigenvalues(wire, energy - kPhaseStep), lambda);
  const double dtheta = std::arg(up / down);
  return dtheta > 0 ? 1 : (dtheta < 0 ? -1 : 0);
}

// Moves every labelled eigenvalue to its nearest eigenvalue at the next z.
// Returns the final positions in the input order.
std::vector<Complex> track(const WireModel& wire, double energy, double delta,
                           std::vector<Complex> current, int steps) {
  for (int s = 1; s <= steps; ++s) {
    auto next = transfer_eigenvalues(wire, Complex(energy, delta * s / steps));
    std::vector<bool> used(next.size(), false);
    for (auto& x : current) {
      int best = -1;
      for (int j = 0; j < int(next.size()); ++j) {
        if (used[j]) continue;
        if (best < 0 || std::abs(next[j] - x) < std::abs(next[best] - x)) best = j;
      }
      used[best] = true;
      x = next[best];
    }
  }
  return current;
}

}  // namespace

WireChannels wire_channels(const WireModel& wire, double energy) {
  wire.validate();
  WireChannels ch;
  ch.energy = energy;
  ch.normal_form = krein::elliptic_normal_form(krein::transfer_matrix(wire.hopping, wire.onsite, energy));
  for (const auto& l : ch.normal_form.lambda_plus) {
    ch.phases_plus.push_back(std::arg(l));
    ch.velocity_plus.push_back(phase_velocity_sign(wire, energy, l));
  }
  for (const auto& l : ch.normal_form.lambda_minus) {
    ch.phases_minus.push_back(std::arg(l));
    ch.velocity_minus.push_back(phase_velocity_sign(wire, energy, l));
  }
  return ch;
}

ContinuedFrames continue_frames(const WireModel& wire, const WireChannels& channels, Complex z,
                                int steps) {
  const auto& nf = channels.normal_form;
  const int l = int(nf.psi_plus.cols());
  if (std::abs(z.real() - channels.energy) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "channels must be computed at Re z");
  }
  if (z.imag() == 0.0) return {nf.psi_plus, nf.psi_minus, nf.n};

  std::vector<Complex> start(nf.lambda_plus);
  start.insert(start.end(), nf.lambda_minus.begin(), nf.lambda_minus.end());
  const auto end = track(wire, channels.energy, z.imag(), start, steps);
  // With Im z > 0 the positive-signature eigenvalues enter the disc.
  const bool up = z.imag() > 0;
  for (int j = 0; j < 2 * l; ++j) {
    const bool plus = j < l;
    const bool inside = std::abs(end[j]) < 1.0;
    if (inside != (plus == up)) {
      throw Error(ErrorCode::NoSpectralSplit,
                  "wire eigenvalues do not leave the circle according to their signature",
                  std::abs(end[j]));
    }
  }
  const auto t = krein::transfer_matrix(wire.hopping, wire.onsite, z).matrix;
  auto span_of = [&](bool inside) {
    const auto s = numerics::ordered_schur(t, [&](Complex x) { return (std::abs(x) < 1.0) == inside; });
    if (s.leading != l) {
      throw Error(ErrorCode::NoSpectralSplit, "wire transfer matrix has no L-dimensional split",
                  double(s.leading));
    }
    return ComplexMatrix(s.q.leftCols(l));
  };
  const ComplexMatrix qp = span_of(up);
  const ComplexMatrix qm = span_of(!up);
  ContinuedFrames f;
  f.psi_plus = qp * (qp.adjoint() * nf.psi_plus);
  f.psi_minus = qm * (qm.adjoint() * nf.psi_minus);
  ComplexMatrix psi(2 * l, 2 * l);
  psi << f.psi_plus, f.psi_minus;
  f.n = psi * krein::cayley_matrix(l);
  return f;
}

ComplexMatrix wire_green(const WireModel& wire, Complex z) {
  // Mirrored half wire: sites m = -n >= 0 carry the hopping A^*.
  model::BlockJacobiModel mirror;
  mirror.dimension = 2;
  mirror.fiber_dim = wire.fiber_dim();
  mirror.layers.push_back({model::FourierMatrix::constant(wire.hopping.adjoint(), 1),
                           model::FourierMatrix::constant(wire.onsite, 1)});
  const double k = 0.0;
  return greens::green_transfer(mirror, z, std::span<const double>(&k, 1)).matrix;
}

}  // namespace topo::scattering
