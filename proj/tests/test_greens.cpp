#include <doctest.h>

#include "helpers.hpp"
#include "topo/error.hpp"
#include "topo/greens/greens.hpp"
#include "topo/model/builtin.hpp"

using namespace topo;
using namespace topo::greens;
using numerics::kI;
using topo::testing::max_abs;

namespace {

ErrorCode code_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

ComplexMatrix scalar(Complex x) { return ComplexMatrix::Constant(1, 1, x); }

// g = 1/(-z - g) for the half-infinite chain, iterated from g = 0.
Complex chain_continued_fraction(Complex z, int terms) {
  Complex g = 0.0;
  for (int i = 0; i < terms; ++i) g = 1.0 / (-z - g);
  return g;
}

double min_imag_eigenvalue(const ComplexMatrix& g) {
  const ComplexMatrix im = (g - g.adjoint()) / (2.0 * kI);
  return numerics::hermitian_eigen(im).eigenvalues.minCoeff();
}

const std::vector<double> kZero{0.0};

}  // namespace

TEST_CASE("chain boundary Green function") {
  const auto m = model::chain();
  const Complex z = 2.0 * kI;
  const Complex oracle = chain_continued_fraction(z, 400);
  // closed form root of g^2 + z g + 1 = 0 with |g| < 1
  CHECK(std::abs(oracle - kI * (std::sqrt(2.0) - 1.0)) < 1e-14);
  CHECK(std::abs(green_transfer(m, z, kZero).matrix(0, 0) - oracle) < 1e-13);
  CHECK(std::abs(green_truncated(m, z, kZero, 1, 200).matrix(0, 0) - oracle) < 1e-13);
}

TEST_CASE("single layer truncation is the onsite resolvent") {
  const auto m = model::qwz(-1.0);
  const std::vector<double> k{0.8};
  const Complex z(0.1, 0.3);
  const ComplexMatrix expected =
      (m.onsite(1, k) - z * ComplexMatrix::Identity(2, 2)).inverse();
  CHECK(max_abs(green_truncated(m, z, k, 1, 1).matrix - expected) < 1e-14);
}

TEST_CASE("weak coupling leaves the first layer alone") {
  model::BlockJacobiModel m = model::chain();
  m.layers[0].hopping = model::FourierMatrix::constant(scalar(1e-3), 1);
  m.layers[0].onsite = model::FourierMatrix::constant(scalar(5.0), 1);
  const Complex g = green_transfer(m, kI, kZero).matrix(0, 0);
  CHECK(std::abs(g - 1.0 / (5.0 - kI)) < 1e-6);
}

TEST_CASE("no split on the real axis inside the band") {
  CHECK(code_of([] { green_transfer(model::chain(), 0.0, kZero); }) ==
        ErrorCode::NoSpectralSplit);
}

TEST_CASE("the two routes agree") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 6.283);
  for (const auto& m : {model::qwz(-1.0), model::qwz(1.0), model::trivial(2)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> k{u(rng)};
      const Complex z(0.2 * (trial - 2), 0.5 + 0.3 * trial);
      const auto a = green_transfer(m, z, k).matrix;
      const auto b = green_truncated(m, z, k, 1, 300).matrix;
      REQUIRE(max_abs(a - b) < 1e-10);
      REQUIRE(max_abs(green_strip(m, z, k, 3).matrix - green_truncated(m, z, k, 3, 300).matrix) <
              1e-10);
    }
  }
  const auto m4 = model::dirac4(-3.0);
  const std::vector<double> k{0.3, 1.1, 2.0};
  CHECK(max_abs(green_transfer(m4, 0.7 * kI, k).matrix -
                green_truncated(m4, 0.7 * kI, k, 1, 300).matrix) < 1e-10);
}

TEST_CASE("strip Green matrix contains the boundary block") {
  const auto m = model::qwz(-1.0);
  const std::vector<double> k{2.2};
  const Complex z(0.05, 0.02);
  const auto g1 = green_transfer(m, z, k).matrix;
  for (int n : {1, 2, 4}) {
    const auto gn = green_strip(m, z, k, n);
    CHECK(gn.matrix.rows() == 2 * n);
    CHECK(max_abs(gn.matrix.topLeftCorner(2, 2) - g1) < 1e-10);
  }
}

TEST_CASE("period two transfer equals period one") {
  const auto m = model::qwz(-1.0);
  auto m2 = m;
  m2.layers.push_back(m.layers[0]);
  const std::vector<double> k{0.4};
  const Complex z(0.1, 0.05);
  CHECK(max_abs(green_transfer(m2, z, k).matrix - green_transfer(m, z, k).matrix) < 1e-10);
  CHECK(max_abs(green_transfer(m2, z, k, 2).matrix - green_transfer(m, z, k).matrix) < 1e-10);
}

TEST_CASE("truncation error decays with depth") {
  const auto m = model::qwz(-1.0);
  const std::vector<double> k{1.0};
  const Complex z = 0.1 * kI;
  const auto exact = green_transfer(m, z, k).matrix;
  double last = HUGE_VAL;
  for (int depth : {5, 10, 20, 40, 80, 160}) {
    const double err = max_abs(green_truncated(m, z, k, 1, depth).matrix - exact);
    if (last > 1e-14) CHECK(err <= last * (1 + 1e-6));
    last = err;
  }
  CHECK(last < 1e-12);
}

TEST_CASE("Green matrices are Herglotz") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 6.283);
  const auto m = model::qwz(-1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> k{u(rng)};
    const Complex z(0.3 * std::sin(trial), 1e-3 * (1 + trial));
    const auto g = green_strip(m, z, k, 1 + trial % 3).matrix;
    REQUIRE(min_imag_eigenvalue(g) > 0.0);
    const ComplexMatrix v = cayley(g);
    REQUIRE(numerics::spectral_norm(v) < 1.0);
    REQUIRE(max_abs(cayley_inverse(v) - g) < 1e-8 * std::max(1.0, max_abs(g)));
  }
}

TEST_CASE("Cayley transform examples") {
  CHECK(std::abs(cayley(scalar(kI))(0, 0)) < 1e-15);
  CHECK(std::abs(cayley(scalar(2.0 * kI))(0, 0) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(cayley(scalar(1.0 + kI))(0, 0) - Complex(1, -2) / 5.0) < 1e-15);
  CHECK(code_of([] { cayley(scalar(-kI)); }) == ErrorCode::CayleyUndefined);
  CHECK(code_of([] { cayley_inverse(scalar(1.0)); }) == ErrorCode::CayleyUndefined);
}

TEST_CASE("boundary unitary at epsilon one half is the Cayley transform") {
  const auto m = model::qwz(-1.0);
  const std::vector<double> k{0.6};
  const Complex z(0.0, 0.02);
  CHECK(max_abs(boundary_unitary(m, z, k, 2, 0.5) - cayley(green_strip(m, z, k, 2).matrix)) <
        1e-12);
  GreenOptions truncated;
  truncated.route = GreenRoute::truncated_resolvent;
  truncated.depth = 200;
  CHECK(max_abs(boundary_unitary(m, z, k, 1, 0.5, truncated) - boundary_unitary(m, z, k)) < 1e-9);
}

TEST_CASE("bulk gap") {
  const auto gap = bulk_gap(model::qwz(-1.0), 0.0, 64);
  CHECK(gap.contains(0.0));
  CHECK(gap.width() > 0.5);
  // every bulk eigenvalue on a finer grid stays out of the reported gap, up to grid error
  const model::MomentumGrid fine(2, 101, 0.37);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const auto ev = numerics::hermitian_eigen(model::bulk_fiber(model::qwz(-1.0), fine.node(i)))
                        .eigenvalues;
    for (int j = 0; j < ev.size(); ++j) REQUIRE(!gap.shrunk(0.05).contains(ev[j]));
  }
  const auto s = gap.shrunk(0.1);
  CHECK(s.lower == doctest::Approx(gap.lower + 0.1 * gap.width()));
  CHECK(s.upper == doctest::Approx(gap.upper - 0.1 * gap.width()));
  const double in_band = gap.upper + 0.05;
  CHECK(code_of([&] { bulk_gap(model::qwz(-1.0), in_band, 64); }) == ErrorCode::GapViolated);
  CHECK(code_of([] { bulk_gap(model::chain(), 0.0, 64); }) == ErrorCode::GapViolated);
}

TEST_CASE("depth rules and the smoothstep") {
  CHECK(default_depth(2.0) == 50);
  CHECK(default_depth(0.5) == 80);
  CHECK(exp_map_depth(10) == 70);
  CHECK(exp_map_depth(40) == 120);
  const Gap g{-1.0, 1.0};
  CHECK(smoothstep(-2.0, g) == 0.0);
  CHECK(smoothstep(-1.0, g) == 0.0);
  CHECK(smoothstep(0.0, g) == doctest::Approx(0.5));
  CHECK(smoothstep(1.0, g) == 1.0);
  CHECK(smoothstep(5.0, g) == 1.0);
}

TEST_CASE("exponential map") {
  const auto triv = model::trivial(2);
  const auto tg = bulk_gap(triv, 0.0, 32).shrunk(0.05);
  const std::vector<double> k{0.9};
  // no edge states: exp(2 pi i f(H)) is 1 on both band groups
  CHECK(max_abs(exp_map_unitary(triv, k, 10, tg, 0.0) - ComplexMatrix::Identity(20, 20)) < 1e-8);

  const auto q = model::qwz(-1.0);
  const auto qg = bulk_gap(q, 0.0, 64).shrunk(0.05);
  const auto u = exp_map_unitary(q, k, 30, qg, 0.0);
  CHECK(u.rows() == 60);
  CHECK(numerics::unitarity_residual(u) < 1e-6);
  CHECK(code_of([&] { exp_map_unitary(q, k, 30, Gap{0.1, 0.2}, 0.0); }) == ErrorCode::InvalidGap);
  CHECK(code_of([&] { exp_map_unitary(q, k, 30, Gap{-5.0, 5.0}, 0.0); }) == ErrorCode::InvalidGap);
}
