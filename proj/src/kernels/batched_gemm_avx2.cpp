#include "topo/kernels/batched_gemm.hpp"

#if defined(TOPO_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#endif

namespace topo::kernels::avx2 {

#if defined(TOPO_HAVE_AVX2_KERNELS)

bool available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

namespace {

// (xr + i xi) * [y0, y1] for two packed complex doubles.
inline __m256d cmul(__m256d xr, __m256d xi, __m256d y) {
  const __m256d ys = _mm256_permute_pd(y, 0b0101);
  return _mm256_fmaddsub_pd(xr, y, _mm256_mul_pd(xi, ys));
}

inline __m128d cmul(__m128d xr, __m128d xi, __m128d y) {
  const __m128d ys = _mm_permute_pd(y, 0b01);
  return _mm_fmaddsub_pd(xr, y, _mm_mul_pd(xi, ys));
}

}  // namespace

void batched_gemm(const GemmShape& s, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c) {
  // Works on raw doubles only: no templated std code is instantiated here, so
  // nothing compiled for AVX2 can be shared with the portable objects.
  constexpr std::size_t kMaxOperand = 1024;
  const std::size_t as = s.a_size(), bs = s.b_size(), cs = s.c_size();
  if (as > kMaxOperand || bs > kMaxOperand) {
    scalar::batched_gemm(s, batch, a, b, c);
    return;
  }
  // op(A) as m x k and op(B) as k x n, row-major and already conjugated.
  alignas(32) double opa[2 * kMaxOperand];
  alignas(32) double opb[2 * kMaxOperand];
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (std::size_t e = 0; e < batch; ++e) {
    const double* ae = ad + 2 * e * as;
    const double* be = bd + 2 * e * bs;
    double* ce = cd + 2 * e * cs;
    const double* x = ae;
    if (s.adjoint_a) {
      for (int i = 0; i < s.m; ++i) {
        for (int l = 0; l < s.k; ++l) {
          opa[2 * (i * s.k + l)] = ae[2 * (l * s.m + i)];
          opa[2 * (i * s.k + l) + 1] = -ae[2 * (l * s.m + i) + 1];
        }
      }
      x = opa;
    }
    const double* y = be;
    if (s.adjoint_b) {
      for (int l = 0; l < s.k; ++l) {
        for (int j = 0; j < s.n; ++j) {
          opb[2 * (l * s.n + j)] = be[2 * (j * s.k + l)];
          opb[2 * (l * s.n + j) + 1] = -be[2 * (j * s.k + l) + 1];
        }
      }
      y = opb;
    }
    for (int i = 0; i < s.m; ++i) {
      int j = 0;
      for (; j + 1 < s.n; j += 2) {
        __m256d acc = _mm256_setzero_pd();
        for (int l = 0; l < s.k; ++l) {
          const double* xv = x + 2 * (i * s.k + l);
          const __m256d yv = _mm256_loadu_pd(y + 2 * (l * s.n + j));
          acc = _mm256_add_pd(acc, cmul(_mm256_set1_pd(xv[0]), _mm256_set1_pd(xv[1]), yv));
        }
        _mm256_storeu_pd(ce + 2 * (i * s.n + j), acc);
      }
      if (j < s.n) {
        __m128d acc = _mm_setzero_pd();
        for (int l = 0; l < s.k; ++l) {
          const double* xv = x + 2 * (i * s.k + l);
          const __m128d yv = _mm_loadu_pd(y + 2 * (l * s.n + j));
          acc = _mm_add_pd(acc, cmul(_mm_set1_pd(xv[0]), _mm_set1_pd(xv[1]), yv));
        }
        _mm_storeu_pd(ce + 2 * (i * s.n + j), acc);
      }
    }
  }
}

#else

bool available() { return false; }

void batched_gemm(const GemmShape& s, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c) {
  scalar::batched_gemm(s, batch, a, b, c);
}

#endif

}  // namespace topo::kernels::avx2
