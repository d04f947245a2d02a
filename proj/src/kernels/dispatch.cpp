#include "topo/kernels/batched_gemm.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace topo::kernels {

namespace {

Isa initial_isa() {
  // TOPO_ISA=scalar pins the reference kernels, e.g. for bisecting differences.
  if (const char* env = std::getenv("TOPO_ISA"); env && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

void batched_gemm(const GemmShape& shape, std::size_t batch, const cplx* a,
                  const cplx* b, cplx* c) {
  if (active_isa() == Isa::avx2) {
    avx2::batched_gemm(shape, batch, a, b, c);
  } else {
    scalar::batched_gemm(shape, batch, a, b, c);
  }
}

}  // namespace topo::kernels
