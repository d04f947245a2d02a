#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "helpers.hpp"
#include "topo/error.hpp"
#include "topo/krein/krein.hpp"

using namespace topo;
using namespace topo::krein;
using numerics::kI;
using topo::testing::max_abs;
using topo::testing::random_hermitian;
using topo::testing::random_matrix;

namespace {

ComplexMatrix scalar(Complex x) { return ComplexMatrix::Constant(1, 1, x); }

ErrorCode code_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

// Onsite term with spectrum inside (-1, 1): with A = 1 every channel is open at E = 0.
ComplexMatrix open_onsite(std::mt19937_64& rng, int l) {
  const ComplexMatrix h = random_hermitian(rng, l);
  return 0.9 * h / numerics::spectral_norm(h);
}

// A and B diagonal in a common random basis, every channel open at E = 0.
std::pair<ComplexMatrix, ComplexMatrix> open_wire(std::mt19937_64& rng, int l) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ComplexMatrix v = topo::testing::random_unitary(rng, l);
  ComplexMatrix a = ComplexMatrix::Zero(l, l), b = ComplexMatrix::Zero(l, l);
  for (int j = 0; j < l; ++j) {
    const double r = 0.6 + u(rng);
    a(j, j) = r * std::exp(kI * 6.0 * u(rng));
    b(j, j) = 1.8 * r * (u(rng) - 0.5);
  }
  return {v * a * v.adjoint(), v * b * v.adjoint()};
}

}  // namespace

TEST_CASE("reference forms") {
  for (int l : {1, 3}) {
    const ComplexMatrix c = cayley_matrix(l);
    CHECK(numerics::unitarity_residual(c) < 1e-15);
    CHECK(max_abs(c * krein_form(l) * c.adjoint() - reference_form(l)) < 1e-15);
  }
  ComplexMatrix g(2, 2);
  g << 0, -kI, kI, 0;
  CHECK(max_abs(krein_form(1) - g) == 0.0);
}

TEST_CASE("chain transfer matrices") {
  ComplexMatrix t0(2, 2), t3(2, 2);
  t0 << 0, -1, 1, 0;
  t3 << 3, -1, 1, 0;
  CHECK(max_abs(transfer_matrix(scalar(1), scalar(0), 0.0).matrix - t0) == 0.0);
  CHECK(max_abs(transfer_matrix(scalar(1), scalar(0), 3.0).matrix - t3) == 0.0);

  const std::vector<TransferMatrix> ts(4, transfer_matrix(scalar(1), scalar(0), 0.0));
  ComplexMatrix phi(2, 1);
  phi << kI, 1;
  CHECK(max_abs(propagate(ts, phi) - phi) < 1e-15);
}

TEST_CASE("propagation reproduces the layer recursion") {
  std::mt19937_64 rng(7);
  const int l = 3;
  const ComplexMatrix a = random_matrix(rng, l);
  const ComplexMatrix b = random_hermitian(rng, l);
  const Complex z(0.4, 0.2);
  std::vector<ComplexMatrix> phi{random_matrix(rng, l, 1), random_matrix(rng, l, 1)};
  const ComplexMatrix zb = z * ComplexMatrix::Identity(l, l) - b;
  for (int n = 1; n <= 5; ++n) {
    phi.push_back(a.fullPivLu().solve(zb * phi[n] - a.adjoint() * phi[n - 1]));
  }
  const std::vector<TransferMatrix> ts(5, transfer_matrix(a, b, z));
  ComplexMatrix start(2 * l, 1), end(2 * l, 1);
  start << a * phi[1], phi[0];
  end << a * phi[6], phi[5];
  CHECK(max_abs(propagate(ts, start) - end) < 1e-9 * max_abs(end));
}

TEST_CASE("transfer matrices are G-unitary at real energy") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int l = 1 + trial % 4;
    const auto t = transfer_matrix(random_matrix(rng, l), random_hermitian(rng, l), 0.37 * trial - 5);
    const ComplexMatrix g = krein_form(l);
    REQUIRE(max_abs(t.matrix.adjoint() * g * t.matrix - g) < 1e-10 * t.matrix.squaredNorm());
  }
}

TEST_CASE("chain spectrum at E=0") {
  const auto s = classify_spectrum(transfer_matrix(scalar(1), scalar(0), 0.0));
  CHECK(s.elliptic());
  CHECK(s.on_circle == 2);
  REQUIRE(s.clusters.size() == 2);
  for (const auto& c : s.clusters) {
    CHECK(c.location == CircleClass::on_circle);
    if (c.eigenvalue.imag() < 0) {
      CHECK(std::abs(c.eigenvalue + kI) < 1e-14);
      CHECK(c.nu_plus == 1);
      CHECK(c.nu_minus == 0);
    } else {
      CHECK(std::abs(c.eigenvalue - kI) < 1e-14);
      CHECK(c.nu_plus == 0);
      CHECK(c.nu_minus == 1);
    }
  }
}

TEST_CASE("hyperbolic and parabolic chain spectra") {
  const auto h = classify_spectrum(transfer_matrix(scalar(1), scalar(0), 3.0));
  CHECK(h.inside == 1);
  CHECK(h.outside == 1);
  CHECK(h.on_circle == 0);

  const auto p = classify_spectrum(transfer_matrix(scalar(1), scalar(0), 2.0));
  CHECK(p.on_circle == 2);
  REQUIRE(p.clusters.size() == 1);
  CHECK(p.clusters[0].defective);
  CHECK_FALSE(p.clusters[0].definite());
  CHECK(std::abs(p.clusters[0].eigenvalue - 1.0) < 1e-6);
}

TEST_CASE("spectrum is symmetric under reflection in the circle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = 2 + trial % 3;
    const auto t = transfer_matrix(random_matrix(rng, l), random_hermitian(rng, l), 0.3);
    const auto ev = numerics::eigen(t.matrix).eigenvalues;
    for (int i = 0; i < ev.size(); ++i) {
      const Complex mirror = 1.0 / std::conj(ev[i]);
      double best = HUGE_VAL;
      for (int j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev[j] - mirror));
      REQUIRE(best < 1e-7 * std::max(1.0, std::abs(mirror)));
    }
  }
}

TEST_CASE("eigenvectors are G-orthogonal unless paired") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = 2 + trial % 3;
    const auto t = transfer_matrix(random_matrix(rng, l), random_hermitian(rng, l), -0.2);
    const auto ed = numerics::eigen(t.matrix);
    const ComplexMatrix g = krein_form(l);
    for (int i = 0; i < ed.eigenvalues.size(); ++i) {
      for (int j = 0; j < ed.eigenvalues.size(); ++j) {
        if (std::abs(ed.eigenvalues[i] * std::conj(ed.eigenvalues[j]) - 1.0) < 1e-3) continue;
        const Complex q = (ed.eigenvectors.col(i).adjoint() * g * ed.eigenvectors.col(j))(0, 0);
        REQUIRE(std::abs(q) < 1e-8);
      }
    }
  }
}

TEST_CASE("positive signature eigenphases increase with energy") {
  std::mt19937_64 rng(17);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 1 + trial % 4;
    const ComplexMatrix a = ComplexMatrix::Identity(l, l);
    const ComplexMatrix b = open_onsite(rng, l);
    const auto nf0 = elliptic_normal_form(transfer_matrix(a, b, 0.0));
    const auto ev1 = numerics::eigen(transfer_matrix(a, b, h).matrix).eigenvalues;
    auto rate = [&](Complex lam) {
      Complex best = ev1[0];
      for (int j = 1; j < ev1.size(); ++j)
        if (std::abs(ev1[j] - lam) < std::abs(best - lam)) best = ev1[j];
      return std::arg(best / lam) / h;
    };
    for (Complex lam : nf0.lambda_plus) REQUIRE(rate(lam) > 0);
    for (Complex lam : nf0.lambda_minus) REQUIRE(rate(lam) < 0);
  }
}

TEST_CASE("chain normal form") {
  const auto nf = elliptic_normal_form(transfer_matrix(scalar(1), scalar(0), 0.0));
  ComplexMatrix plus(2, 1), minus(2, 1);
  plus << -kI, 1;
  minus << kI, 1;
  CHECK(max_abs(nf.psi_plus - plus / std::sqrt(2.0)) < 1e-14);
  CHECK(max_abs(nf.psi_minus - minus / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(nf.lambda_plus[0] + kI) < 1e-14);
  CHECK(code_of([] { elliptic_normal_form(transfer_matrix(scalar(1), scalar(0), 3.0)); }) ==
        ErrorCode::NotPerfectlyConducting);
  CHECK(code_of([] { elliptic_normal_form(transfer_matrix(scalar(1), scalar(0), 2.0)); }) ==
        ErrorCode::NotPerfectlyConducting);
}

TEST_CASE("decoupled chains share one cluster per sign") {
  const ComplexMatrix one = ComplexMatrix::Identity(2, 2);
  const auto nf = elliptic_normal_form(transfer_matrix(one, ComplexMatrix::Zero(2, 2), 0.0));
  ComplexMatrix plus(4, 2);
  plus << -kI * one, one;
  CHECK(max_abs(nf.psi_plus - plus / std::sqrt(2.0)) < 1e-14);
  CHECK(nf.lambda_plus.size() == 2);
  CHECK(nf.lambda_minus.size() == 2);
}

TEST_CASE("normal form residuals") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int l = 1 + trial % 5;
    const auto [a, b] = open_wire(rng, l);
    const auto t = transfer_matrix(a, b, 0.0);
    const auto nf = elliptic_normal_form(t);
    const ComplexMatrix g = krein_form(l);
    const ComplexMatrix psi = nf.psi();
    REQUIRE(max_abs(psi.adjoint() * g * psi - reference_form(l)) < 1e-9);
    REQUIRE(max_abs(nf.n.adjoint() * g * nf.n - g) < 1e-9);
    for (int j = 0; j < l; ++j) {
      REQUIRE(max_abs(t.matrix * nf.psi_plus.col(j) - nf.lambda_plus[j] * nf.psi_plus.col(j)) <
              1e-9);
      REQUIRE(max_abs(t.matrix * nf.psi_minus.col(j) - nf.lambda_minus[j] * nf.psi_minus.col(j)) <
              1e-9);
      REQUIRE(std::abs(std::abs(nf.lambda_plus[j]) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("Moebius action") {
  std::mt19937_64 rng(29);
  const int l = 2;
  const ComplexMatrix z = random_matrix(rng, l);
  const ComplexMatrix one = ComplexMatrix::Identity(l, l);
  ComplexMatrix id = ComplexMatrix::Identity(2 * l, 2 * l);
  CHECK(max_abs(mobius(id, z) - z) < 1e-15);
  ComplexMatrix shift = id;
  const ComplexMatrix b = random_matrix(rng, l);
  shift.topRightCorner(l, l) = b;
  CHECK(max_abs(mobius(shift, z) - (z + b)) < 1e-14);
  ComplexMatrix inv = ComplexMatrix::Zero(2 * l, 2 * l);
  inv.topRightCorner(l, l) = one;
  inv.bottomLeftCorner(l, l) = one;
  CHECK(max_abs(mobius(inv, z) * z - one) < 1e-12);
  CHECK(code_of([&] { mobius(inv, ComplexMatrix::Zero(l, l)); }) == ErrorCode::MoebiusUndefined);

  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m1 = random_matrix(rng, 2 * l);
    const ComplexMatrix m2 = random_matrix(rng, 2 * l);
    const ComplexMatrix w = random_matrix(rng, l);
    const ComplexMatrix lhs = mobius(m1 * m2, w);
    REQUIRE(max_abs(lhs - mobius(m1, mobius(m2, w))) < 1e-8 * std::max(1.0, max_abs(lhs)));
  }
}

TEST_CASE("stereographic projection") {
  auto frame = [](Complex a, Complex b) {
    ComplexMatrix f(2, 1);
    f << a, b;
    return f;
  };
  CHECK(std::abs(stereographic(frame(2.0 * kI, -1.0))(0, 0) - 3.0) < 1e-15);
  CHECK(std::abs(stereographic(frame(1, 0))(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(stereographic(frame(0, 1))(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(stereographic(frame(kI, 1))(0, 0)) < 1e-15);
  CHECK(code_of([&] { stereographic(frame(1, kI)); }) == ErrorCode::StereoUndefined);

  // Lagrangian frames land on the unitary group, and a change of basis is invisible.
  std::mt19937_64 rng(31);
  for (int l : {1, 2, 4}) {
    ComplexMatrix phi(2 * l, l);
    phi << ComplexMatrix::Identity(l, l), random_hermitian(rng, l);
    const ComplexMatrix u = stereographic(phi);
    CHECK(numerics::unitarity_residual(u) < 1e-12);
    CHECK(max_abs(stereographic(phi * random_matrix(rng, l)) - u) < 1e-10);
  }
}

TEST_CASE("frame angles") {
  std::mt19937_64 rng(37);
  for (int l : {1, 2, 3}) {
    const auto [a, b] = open_wire(rng, l);
    const auto nf = elliptic_normal_form(transfer_matrix(a, b, 0.0));
    const ComplexMatrix one = ComplexMatrix::Identity(l, l);
    CHECK(max_abs(frame_angles(nf.psi_vee(), nf) - one) < 1e-10);
    CHECK(max_abs(frame_angles(nf.psi_wedge(), nf) + one) < 1e-10);
    ComplexMatrix phi(2 * l, l);
    phi << one, random_hermitian(rng, l);
    CHECK(numerics::unitarity_residual(frame_angles(phi, nf)) < 1e-10);
    ComplexMatrix bad(2 * l, l);
    bad << one, kI * one;
    CHECK(code_of([&] { frame_angles(bad, nf); }) == ErrorCode::NotLagrangian);
  }
}
