#include <atomic>
#include <cstdlib>
#include <string_view>

#include "tdgwg/kernels.hpp"

namespace tdgwg::kernels {

#ifndef TDGWG_HAVE_AVX2
namespace avx2 {
// Not built for this target; isa_available(Isa::Avx2) is false so these are
// never dispatched to.
void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y) {
  scalar::plane_wave_sum(w, rx, ry, values, grad_x, grad_y);
}
void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C) {
  scalar::conj_gemm(X, Y, rows, cols, depth, C);
}
void exp_sincos(std::span<const double>, std::span<double>, std::span<double>, std::span<double>) {
  throw InvalidArgument("AVX2 kernels were not built");
}
}  // namespace avx2
#endif

namespace {

struct KernelSet {
  Isa isa;
  PlaneWaveSumFn plane_wave_sum;
  ConjGemmFn conj_gemm;
};

constexpr KernelSet kScalar{Isa::Scalar, scalar::plane_wave_sum, scalar::conj_gemm};
constexpr KernelSet kAvx2{Isa::Avx2, avx2::plane_wave_sum, avx2::conj_gemm};

bool cpu_has_avx2() {
#if defined(TDGWG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelSet* initial_set() {
  const bool avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("TDGWG_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return &kScalar;
    if (v == "avx2" && avx2) return &kAvx2;
  }
  return avx2 ? &kAvx2 : &kScalar;
}

std::atomic<const KernelSet*>& current() {
  static std::atomic<const KernelSet*> set{initial_set()};
  return set;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load()->isa; }

void set_isa(Isa isa) {
  if (!isa_available(isa)) throw InvalidArgument(std::string(isa_name(isa)) + " kernels unavailable");
  current().store(isa == Isa::Avx2 ? &kAvx2 : &kScalar);
}

void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y) {
  current().load()->plane_wave_sum(w, rx, ry, values, grad_x, grad_y);
}

void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C) {
  current().load()->conj_gemm(X, Y, rows, cols, depth, C);
}

}  // namespace tdgwg::kernels
