#pragma once

#include <vector>

#include "topo/numerics/linalg.hpp"

namespace topo::kernels {

/// C_b = op(A_b) op(B_b) for equally shaped matrices, through batched_gemm.
std::vector<numerics::ComplexMatrix> multiply_batch(const std::vector<numerics::ComplexMatrix>& a,
                                                    const std::vector<numerics::ComplexMatrix>& b,
                                                    bool adjoint_a = false, bool adjoint_b = false);

}  // namespace topo::kernels
