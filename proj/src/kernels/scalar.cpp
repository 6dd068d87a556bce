#include "tdgwg/kernels.hpp"

namespace tdgwg::kernels::scalar {

void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y) {
  const bool want_grad = !grad_x.empty();
  const std::size_t nd = w.coeffs.size();
  for (std::size_t p = 0; p < rx.size(); ++p) {
    cplx v{}, gx{}, gy{};
    for (std::size_t j = 0; j < nd; ++j) {
      const cplx t = w.coeffs[j] * std::exp(w.exponent_x[j] * rx[p] + w.exponent_y[j] * ry[p]);
      v += t;
      if (want_grad) {
        gx += w.exponent_x[j] * t;
        gy += w.exponent_y[j] * t;
      }
    }
    values[p] = v;
    if (want_grad) {
      grad_x[p] = gx;
      grad_y[p] = gy;
    }
  }
}

void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C) {
  for (int r = 0; r < rows; ++r) {
    const cplx* x = X.data() + static_cast<std::size_t>(r) * depth;
    for (int c = 0; c < cols; ++c) {
      const cplx* y = Y.data() + static_cast<std::size_t>(c) * depth;
      cplx acc{};
      for (int l = 0; l < depth; ++l) acc += std::conj(x[l]) * y[l];
      C[static_cast<std::size_t>(r) * cols + c] = acc;
    }
  }
}

}  // namespace tdgwg::kernels::scalar
