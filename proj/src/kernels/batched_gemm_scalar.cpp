#include "topo/kernels/batched_gemm.hpp"

namespace topo::kernels::scalar {

void batched_gemm(const GemmShape& s, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c) {
  const std::size_t as = s.a_size(), bs = s.b_size(), cs = s.c_size();
  for (std::size_t e = 0; e < batch; ++e) {
    const cplx* ae = a + e * as;
    const cplx* be = b + e * bs;
    cplx* ce = c + e * cs;
    for (int i = 0; i < s.m; ++i) {
      for (int j = 0; j < s.n; ++j) {
        cplx acc = 0.0;
        for (int l = 0; l < s.k; ++l) {
          const cplx x = s.adjoint_a ? std::conj(ae[l * s.m + i]) : ae[i * s.k + l];
          const cplx y = s.adjoint_b ? std::conj(be[j * s.k + l]) : be[l * s.n + j];
          acc += x * y;
        }
        ce[i * s.n + j] = acc;
      }
    }
  }
}

}  // namespace topo::kernels::scalar
