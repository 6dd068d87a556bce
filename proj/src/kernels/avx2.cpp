// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has checked the CPU.

#include <immintrin.h>

#include <algorithm>
#include <array>

#include "tdgwg/kernels.hpp"

namespace tdgwg::kernels::avx2 {

namespace {

inline __m256d polevl(__m256d x, const double* c, int n) {
  __m256d r = _mm256_set1_pd(c[0]);
  for (int i = 1; i <= n; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
  return r;
}

// Cephes exp: Pade form on |r| <= ln2/2, scaled by 2^n.
inline __m256d exp_pd(__m256d x) {
  static constexpr double P[] = {1.26177193074810590878e-4, 3.02994407707441961300e-2,
                                 9.99999999999999999910e-1};
  static constexpr double Q[] = {3.00198505138664455042e-6, 2.52448340349684104192e-3,
                                 2.27265548208155028766e-1, 2.00000000000000000009e0};
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(708.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);
  const __m256d rr = _mm256_mul_pd(r, r);
  const __m256d px = _mm256_mul_pd(r, polevl(rr, P, 2));
  const __m256d qx = polevl(rr, Q, 3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));
  // 2^n from the integer bits of n + 1.5 * 2^52
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                _mm256_castpd_si256(magic));
  ni = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(ni));
}

// Cephes sin/cos with octant reduction and three-part pi/4.
inline void sincos_pd(__m256d x, __m256d& s, __m256d& c) {
  static constexpr double SC[] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                                  2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                                  8.33333333332211858878e-3,  -1.66666666666666307295e-1};
  static constexpr double CC[] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                                  -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                                  -1.38888888888730564116e-3,  4.16666666666665929218e-2};
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  const __m256d neg = _mm256_and_pd(x, sign_bit);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615)));
  // round the octant up to even
  const __m256d half_y = _mm256_mul_pd(y, _mm256_set1_pd(0.5));
  const __m256d odd = _mm256_cmp_pd(_mm256_floor_pd(half_y), half_y, _CMP_NEQ_OQ);
  y = _mm256_add_pd(y, _mm256_and_pd(odd, _mm256_set1_pd(1.0)));
  // j = y mod 8
  const __m256d j = _mm256_fnmadd_pd(
      _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125))), _mm256_set1_pd(8.0), y);
  const __m256d hi = _mm256_cmp_pd(j, _mm256_set1_pd(3.5), _CMP_GT_OQ);
  const __m256d jr = _mm256_sub_pd(j, _mm256_and_pd(hi, _mm256_set1_pd(4.0)));
  const __m256d swap = _mm256_cmp_pd(jr, _mm256_set1_pd(1.5), _CMP_GT_OQ);

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(7.85398125648498535156e-1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(3.77489470793079817668e-8), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(2.69515142907905952645e-15), z);
  const __m256d zz = _mm256_mul_pd(z, z);
  const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl(zz, SC, 5), z);
  __m256d pc = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0));
  pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl(zz, CC, 5), pc);

  const __m256d sv = _mm256_blendv_pd(ps, pc, swap);
  const __m256d cv = _mm256_blendv_pd(pc, ps, swap);
  const __m256d s_flip = _mm256_xor_pd(_mm256_and_pd(hi, sign_bit), neg);
  const __m256d c_flip = _mm256_and_pd(_mm256_xor_pd(hi, swap), sign_bit);
  s = _mm256_xor_pd(sv, s_flip);
  c = _mm256_xor_pd(cv, c_flip);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void exp_sincos(std::span<const double> x, std::span<double> exp_out, std::span<double> sin_out,
                std::span<double> cos_out) {
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    __m256d s, c;
    sincos_pd(v, s, c);
    _mm256_storeu_pd(exp_out.data() + i, exp_pd(v));
    _mm256_storeu_pd(sin_out.data() + i, s);
    _mm256_storeu_pd(cos_out.data() + i, c);
  }
  if (i < x.size()) {
    alignas(32) std::array<double, 4> buf{}, e{}, s{}, c{};
    std::copy(x.begin() + i, x.end(), buf.begin());
    __m256d sv, cv;
    sincos_pd(_mm256_load_pd(buf.data()), sv, cv);
    _mm256_store_pd(e.data(), exp_pd(_mm256_load_pd(buf.data())));
    _mm256_store_pd(s.data(), sv);
    _mm256_store_pd(c.data(), cv);
    for (std::size_t k = 0; i + k < x.size(); ++k) {
      exp_out[i + k] = e[k];
      sin_out[i + k] = s[k];
      cos_out[i + k] = c[k];
    }
  }
}

void plane_wave_sum(const PlaneWaveExpansion& w, std::span<const double> rx,
                    std::span<const double> ry, std::span<cplx> values, std::span<cplx> grad_x,
                    std::span<cplx> grad_y) {
  const bool want_grad = !grad_x.empty();
  const std::size_t nd = w.coeffs.size();
  const std::size_t np = rx.size();
  for (std::size_t p0 = 0; p0 < np; p0 += 4) {
    const std::size_t lanes = std::min<std::size_t>(4, np - p0);
    alignas(32) std::array<double, 4> bx{}, by{};
    for (std::size_t k = 0; k < lanes; ++k) {
      bx[k] = rx[p0 + k];
      by[k] = ry[p0 + k];
    }
    const __m256d x = _mm256_load_pd(bx.data());
    const __m256d y = _mm256_load_pd(by.data());
    __m256d vr = _mm256_setzero_pd(), vi = _mm256_setzero_pd();
    __m256d gxr = vr, gxi = vr, gyr = vr, gyi = vr;
    for (std::size_t j = 0; j < nd; ++j) {
      const cplx cx = w.exponent_x[j];
      const cplx cy = w.exponent_y[j];
      const __m256d er =
          _mm256_fmadd_pd(_mm256_set1_pd(cx.real()), x, _mm256_mul_pd(_mm256_set1_pd(cy.real()), y));
      const __m256d ei =
          _mm256_fmadd_pd(_mm256_set1_pd(cx.imag()), x, _mm256_mul_pd(_mm256_set1_pd(cy.imag()), y));
      const __m256d mag = exp_pd(er);
      __m256d s, c;
      sincos_pd(ei, s, c);
      const __m256d zr = _mm256_set1_pd(w.coeffs[j].real());
      const __m256d zi = _mm256_set1_pd(w.coeffs[j].imag());
      // t = z * mag * (c + i s)
      const __m256d tr = _mm256_mul_pd(mag, _mm256_fmsub_pd(zr, c, _mm256_mul_pd(zi, s)));
      const __m256d ti = _mm256_mul_pd(mag, _mm256_fmadd_pd(zr, s, _mm256_mul_pd(zi, c)));
      vr = _mm256_add_pd(vr, tr);
      vi = _mm256_add_pd(vi, ti);
      if (want_grad) {
        const __m256d axr = _mm256_set1_pd(cx.real()), axi = _mm256_set1_pd(cx.imag());
        const __m256d ayr = _mm256_set1_pd(cy.real()), ayi = _mm256_set1_pd(cy.imag());
        gxr = _mm256_add_pd(gxr, _mm256_fmsub_pd(axr, tr, _mm256_mul_pd(axi, ti)));
        gxi = _mm256_add_pd(gxi, _mm256_fmadd_pd(axr, ti, _mm256_mul_pd(axi, tr)));
        gyr = _mm256_add_pd(gyr, _mm256_fmsub_pd(ayr, tr, _mm256_mul_pd(ayi, ti)));
        gyi = _mm256_add_pd(gyi, _mm256_fmadd_pd(ayr, ti, _mm256_mul_pd(ayi, tr)));
      }
    }
    alignas(32) std::array<double, 4> a{}, b{};
    _mm256_store_pd(a.data(), vr);
    _mm256_store_pd(b.data(), vi);
    for (std::size_t k = 0; k < lanes; ++k) values[p0 + k] = {a[k], b[k]};
    if (want_grad) {
      _mm256_store_pd(a.data(), gxr);
      _mm256_store_pd(b.data(), gxi);
      for (std::size_t k = 0; k < lanes; ++k) grad_x[p0 + k] = {a[k], b[k]};
      _mm256_store_pd(a.data(), gyr);
      _mm256_store_pd(b.data(), gyi);
      for (std::size_t k = 0; k < lanes; ++k) grad_y[p0 + k] = {a[k], b[k]};
    }
  }
}

void conj_gemm(std::span<const cplx> X, std::span<const cplx> Y, int rows, int cols, int depth,
               std::span<cplx> C) {
  const int pairs = depth / 2;
  for (int r = 0; r < rows; ++r) {
    const double* x = reinterpret_cast<const double*>(X.data() + static_cast<std::size_t>(r) * depth);
    for (int c = 0; c < cols; ++c) {
      const double* y =
          reinterpret_cast<const double*>(Y.data() + static_cast<std::size_t>(c) * depth);
      __m256d same = _mm256_setzero_pd();   // xr yr, xi yi
      __m256d cross = _mm256_setzero_pd();  // xr yi, xi yr
      for (int l = 0; l < pairs; ++l) {
        const __m256d xv = _mm256_loadu_pd(x + 4 * l);
        const __m256d yv = _mm256_loadu_pd(y + 4 * l);
        same = _mm256_fmadd_pd(xv, yv, same);
        cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
      }
      // alternate signs: xr yi - xi yr
      cross = _mm256_xor_pd(cross, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0));
      double re = hsum(same);
      double im = hsum(cross);
      if (depth % 2) {
        const int l = depth - 1;
        re += x[2 * l] * y[2 * l] + x[2 * l + 1] * y[2 * l + 1];
        im += x[2 * l] * y[2 * l + 1] - x[2 * l + 1] * y[2 * l];
      }
      C[static_cast<std::size_t>(r) * cols + c] = {re, im};
    }
  }
}

}  // namespace tdgwg::kernels::avx2
