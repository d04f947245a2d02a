#pragma once

// Batched small complex matrix products over grid nodes.
//
// Every batch entry b computes C_b = op(A_b) * op(B_b) for row-major operands
// stored back to back. op is either the identity or the conjugate transpose.
// The scalar variant is the reference; the AVX2 variant must agree with it to
// rounding and is chosen at runtime when the CPU supports it.

#include <complex>
#include <cstddef>
#include <string_view>

namespace topo::kernels {

using cplx = std::complex<double>;

struct GemmShape {
  int m = 0;  // rows of op(A) and C
  int n = 0;  // columns of op(B) and C
  int k = 0;  // inner dimension
  bool adjoint_a = false;
  bool adjoint_b = false;

  // Element counts of one stored operand (before op is applied).
  std::size_t a_size() const { return std::size_t(m) * k; }
  std::size_t b_size() const { return std::size_t(k) * n; }
  std::size_t c_size() const { return std::size_t(m) * n; }
};

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best ISA supported by this CPU and build.
Isa detected_isa();
/// ISA used by batched_gemm; defaults to detected_isa().
Isa active_isa();
/// Forces an ISA (falls back to scalar when unsupported). Not thread safe;
/// intended for tests and benchmarks.
void set_active_isa(Isa isa);

void batched_gemm(const GemmShape& shape, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c);

namespace scalar {
void batched_gemm(const GemmShape& shape, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c);
}

namespace avx2 {
bool available();
void batched_gemm(const GemmShape& shape, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c);
}

}  // namespace topo::kernels
