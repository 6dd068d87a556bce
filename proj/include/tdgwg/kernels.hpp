#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2/FMA version; the active set is chosen once at runtime
// from the CPU features (override with TDGWG_KERNELS=scalar|avx2).

#include <span>

#include "tdgwg/common.hpp"

namespace tdgwg::kernels {

/// A plane-wave expansion sum_j z_j exp(c_j . r) on one element.
struct PlaneWaveExpansion {
  std::span<const cplx> exponent_x;  // c_j.x
  std::span<const cplx> exponent_y;  // c_j.y
  std::span<const cplx> coeffs;      // z_j
};

/// values[p] = sum_j z_j exp(c_j . r_p) with r_p = (rx[p], ry[p]).
/// When grad_x / grad_y are non-empty they receive the gradient.
using PlaneWaveSumFn = void (*)(const PlaneWaveExpansion& w, std::span<const double> rx,
                                std::span<const double> ry, std::span<cplx> values,
                                std::span<cplx> grad_x, std::span<cplx> grad_y);

/// C[r * cols + c] = sum_l conj(X[r * depth + l]) * Y[c * depth + l]
using ConjGemmFn = void (*)(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols,
                            int depth, std::span<cplx> C);

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Selects a kernel set; throws InvalidArgument if not available on this CPU.
void set_isa(Isa isa);

void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values,
                    std::span<cplx> grad_x = {}, std::span<cplx> grad_y = {});

void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C);

namespace scalar {
void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y);
void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C);
}  // namespace scalar

namespace avx2 {
void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y);
void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C);
/// Lane-wise exp and sincos used by plane_wave_sum, exposed for testing.
void exp_sincos(std::span<const double> x, std::span<double> exp_out, std::span<double> sin_out,
                std::span<double> cos_out);
}  // namespace avx2

}  // namespace tdgwg::kernels
