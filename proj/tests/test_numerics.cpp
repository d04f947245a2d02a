#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "topo/error.hpp"
#include "topo/numerics/linalg.hpp"

using namespace topo;
using namespace topo::numerics;
using topo::testing::max_abs;
using topo::testing::random_matrix;

namespace {

std::vector<Complex> sorted(const ComplexVector& v) {
  std::vector<Complex> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

TEST_CASE("eigen of a diagonal matrix") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -1.0;
  const auto e = eigen(a);
  const auto ev = sorted(e.eigenvalues);
  CHECK(std::abs(ev[0] - Complex(-1.0)) < 1e-14);
  CHECK(std::abs(ev[1] - Complex(2.0)) < 1e-14);
  for (int j = 0; j < 2; ++j) {
    // each eigenvector is a standard basis vector up to phase
    CHECK(e.eigenvectors.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK_FALSE(e.defective[j]);
  }
}

TEST_CASE("eigen flags the nilpotent Jordan block") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  const auto e = eigen(a);
  CHECK(std::abs(e.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(e.eigenvalues(1)) < 1e-12);
  CHECK(e.defective[0]);
  CHECK(e.defective[1]);
  CHECK(e.cluster[0] == e.cluster[1]);
}

TEST_CASE("eigen of the rotation generator") {
  ComplexMatrix a(2, 2);
  a << 0.0, -1.0, 1.0, 0.0;
  const auto ev = sorted(eigen(a).eigenvalues);
  CHECK(std::abs(ev[0] - Complex(0, -1)) < 1e-14);
  CHECK(std::abs(ev[1] - Complex(0, 1)) < 1e-14);
}

TEST_CASE("eigen residuals on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 20);
  for (int s = 0; s < 1000; ++s) {
    const ComplexMatrix a = random_matrix(rng, dim(rng));
    const auto e = eigen(a);
    const double scale = spectral_norm(a);
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      const ComplexVector v = e.eigenvectors.col(j);
      REQUIRE(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
      REQUIRE((a * v - e.eigenvalues(j) * v).norm() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("semisimple repeated eigenvalue is not defective") {
  ComplexMatrix a = 3.0 * ComplexMatrix::Identity(3, 3);
  const auto e = eigen(a);
  for (int j = 0; j < 3; ++j) CHECK_FALSE(e.defective[j]);
  CHECK(std::abs(e.eigenvectors.determinant()) == doctest::Approx(1.0));
}

TEST_CASE("solve examples") {
  std::mt19937_64 rng(1);
  const ComplexMatrix b = random_matrix(rng, 3, 2);
  CHECK(max_abs(solve(ComplexMatrix::Identity(3, 3), b) - b) < 1e-15);
  const ComplexMatrix two = 2.0 * ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(solve(two, ComplexMatrix::Identity(2, 2)) - 0.5 * ComplexMatrix::Identity(2, 2)) <
        1e-15);
  ComplexMatrix singular(2, 2);
  singular << 1.0, 1.0, 0.0, 0.0;
  try {
    solve(singular, ComplexMatrix::Identity(2, 2));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("solve recovers random solutions") {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 12;
    const ComplexMatrix a = random_matrix(rng, n) + 4.0 * ComplexMatrix::Identity(n, n);
    const ComplexMatrix x0 = random_matrix(rng, n, 3);
    const ComplexMatrix x = solve(a, a * x0);
    REQUIRE((x - x0).norm() <= 1e-10 * x0.norm());
    const ComplexMatrix y = solve_right(x0.transpose() * a, a);
    REQUIRE((y - x0.transpose()).norm() <= 1e-10 * x0.norm());
  }
}

TEST_CASE("condition limit reports the estimate") {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(1, 1) = 1e-14;
  try {
    solve(a, ComplexMatrix::Identity(2, 2));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
    CHECK(e.value() > 1e12);
  }
  CHECK_NOTHROW(solve(a, ComplexMatrix::Identity(2, 2), 1e15));
}

TEST_CASE("ordered Schur moves the selected eigenvalues to the front") {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 50; ++s) {
    const ComplexMatrix a = random_matrix(rng, 6);
    const auto inside = [](Complex z) { return std::abs(z) < 2.0; };
    const auto os = ordered_schur(a, inside);
    CHECK(max_abs(os.q * os.t * os.q.adjoint() - a) < 1e-10);
    CHECK(max_abs(os.q.adjoint() * os.q - ComplexMatrix::Identity(6, 6)) < 1e-12);
    int count = 0;
    for (int j = 0; j < 6; ++j) count += inside(os.t(j, j));
    CHECK(os.leading == count);
    for (int j = 0; j < 6; ++j) CHECK(inside(os.t(j, j)) == (j < count));
    // the leading columns span an invariant subspace
    if (count > 0) {
      const ComplexMatrix q = os.q.leftCols(count);
      CHECK(max_abs(a * q - q * (q.adjoint() * a * q)) < 1e-10);
    }
  }
}

TEST_CASE("Hermitian helpers") {
  std::mt19937_64 rng(5);
  const ComplexMatrix h = topo::testing::random_hermitian(rng, 5);
  const auto he = hermitian_eigen(h);
  for (int j = 1; j < 5; ++j) CHECK(he.eigenvalues(j - 1) <= he.eigenvalues(j));
  CHECK(max_abs(he.eigenvectors * he.eigenvalues.cast<Complex>().asDiagonal() *
                    he.eigenvectors.adjoint() - h) < 1e-12);
  const ComplexMatrix e = hermitian_function(h, [](double x) { return std::exp(Complex(0, x)); });
  CHECK(unitarity_residual(e) < 1e-12);
  CHECK(hermiticity_residual(h) < 1e-15);
  const ComplexMatrix u = topo::testing::random_unitary(rng, 4);
  CHECK(unitarity_residual(u) < 1e-13);
  CHECK(spectral_norm(u) == doctest::Approx(1.0));
  CHECK(min_singular_value(u) == doctest::Approx(1.0));
}

TEST_CASE("non-finite input is rejected") {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_FALSE(all_finite(a));
  CHECK_THROWS_AS(hermitian_eigen(a), Error);
}
