#include <doctest.h>

#include "helpers.hpp"
#include "topo/kernels/batched_gemm.hpp"
#include "topo/kernels/matrix_batch.hpp"

using namespace topo;
using namespace topo::kernels;
using topo::numerics::ComplexMatrix;
using topo::testing::random_matrix;

namespace {

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_active_isa(saved); }
};

// Runs one batched product per variant and returns the largest difference.
double variant_difference(const GemmShape& s, std::size_t batch, std::mt19937_64& rng) {
  std::vector<cplx> a(batch * s.a_size()), b(batch * s.b_size());
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& x : a) x = {n(rng), n(rng)};
  for (auto& x : b) x = {n(rng), n(rng)};
  std::vector<cplx> c0(batch * s.c_size()), c1(batch * s.c_size());
  scalar::batched_gemm(s, batch, a.data(), b.data(), c0.data());
  avx2::batched_gemm(s, batch, a.data(), b.data(), c1.data());
  double diff = 0.0;
  for (std::size_t i = 0; i < c0.size(); ++i) diff = std::max(diff, std::abs(c0[i] - c1[i]));
  return diff;
}

}  // namespace

TEST_CASE("scalar kernel matches Eigen") {
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::mt19937_64 rng(2);
  for (bool ta : {false, true}) {
    for (bool tb : {false, true}) {
      // stored operands; op(A) is 3 x 4 and op(B) is 4 x 5
      const RowMajor a = ta ? random_matrix(rng, 4, 3) : random_matrix(rng, 3, 4);
      const RowMajor b = tb ? random_matrix(rng, 5, 4) : random_matrix(rng, 4, 5);
      const ComplexMatrix opa = ta ? ComplexMatrix(a.adjoint()) : ComplexMatrix(a);
      const ComplexMatrix opb = tb ? ComplexMatrix(b.adjoint()) : ComplexMatrix(b);
      RowMajor c(3, 5);
      scalar::batched_gemm({3, 5, 4, ta, tb}, 1, a.data(), b.data(), c.data());
      CHECK((ComplexMatrix(c) - opa * opb).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("AVX2 kernel agrees with the scalar reference") {
  if (!avx2::available()) {
    MESSAGE("AVX2 not available on this CPU; the dispatched kernel is the scalar one");
    return;
  }
  std::mt19937_64 rng(3);
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= 7; ++n) {
      for (int k : {1, 2, 5}) {
        for (int flags = 0; flags < 4; ++flags) {
          const GemmShape s{m, n, k, bool(flags & 1), bool(flags & 2)};
          REQUIRE(variant_difference(s, 9, rng) < 1e-13);
        }
      }
    }
  }
  // operands beyond the stack buffer fall back to the scalar path
  CHECK(variant_difference({40, 40, 40, true, false}, 2, rng) < 1e-11);
}

TEST_CASE("multiply_batch is independent of the active ISA") {
  IsaGuard guard;
  std::mt19937_64 rng(4);
  std::vector<ComplexMatrix> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(random_matrix(rng, 4));
    b.push_back(random_matrix(rng, 4));
  }
  set_active_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  const auto c0 = multiply_batch(a, b, true, false);
  set_active_isa(detected_isa());
  const auto c1 = multiply_batch(a, b, true, false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((c0[i] - a[i].adjoint() * b[i]).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((c0[i] - c1[i]).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("multiply_batch handles rectangular and empty operands") {
  std::mt19937_64 rng(5);
  std::vector<ComplexMatrix> a{random_matrix(rng, 4, 2)}, b{random_matrix(rng, 4, 3)};
  const auto c = multiply_batch(a, b, true, false);
  CHECK(c[0].rows() == 2);
  CHECK(c[0].cols() == 3);
  CHECK((c[0] - a[0].adjoint() * b[0]).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(multiply_batch({}, {}).empty());
}
