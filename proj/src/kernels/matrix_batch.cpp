#include "topo/kernels/matrix_batch.hpp"

#include "topo/error.hpp"
#include "topo/kernels/batched_gemm.hpp"

namespace topo::kernels {

using numerics::ComplexMatrix;

std::vector<ComplexMatrix> multiply_batch(const std::vector<ComplexMatrix>& a,
                                          const std::vector<ComplexMatrix>& b, bool adjoint_a,
                                          bool adjoint_b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "batch sizes differ");
  if (a.empty()) return {};
  GemmShape s;
  s.adjoint_a = adjoint_a;
  s.adjoint_b = adjoint_b;
  s.m = int(adjoint_a ? a[0].cols() : a[0].rows());
  s.k = int(adjoint_a ? a[0].rows() : a[0].cols());
  s.n = int(adjoint_b ? b[0].rows() : b[0].cols());
  if ((adjoint_b ? b[0].cols() : b[0].rows()) != s.k) {
    throw Error(ErrorCode::InvalidArgument, "inner dimensions differ");
  }
  const std::size_t batch = a.size();
  std::vector<cplx> abuf(batch * s.a_size()), bbuf(batch * s.b_size()), cbuf(batch * s.c_size());
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (std::size_t e = 0; e < batch; ++e) {
    if (a[e].rows() != a[0].rows() || a[e].cols() != a[0].cols() ||
        b[e].rows() != b[0].rows() || b[e].cols() != b[0].cols()) {
      throw Error(ErrorCode::InvalidArgument, "batch entries differ in shape");
    }
    Eigen::Map<RowMajor>(abuf.data() + e * s.a_size(), a[e].rows(), a[e].cols()) = a[e];
    Eigen::Map<RowMajor>(bbuf.data() + e * s.b_size(), b[e].rows(), b[e].cols()) = b[e];
  }
  batched_gemm(s, batch, abuf.data(), bbuf.data(), cbuf.data());
  std::vector<ComplexMatrix> c(batch);
  for (std::size_t e = 0; e < batch; ++e) {
    c[e] = Eigen::Map<const RowMajor>(cbuf.data() + e * s.c_size(), s.m, s.n);
  }
  return c;
}

}  // namespace topo::kernels
