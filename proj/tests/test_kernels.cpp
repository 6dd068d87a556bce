#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tdgwg/kernels.hpp"

using namespace tdgwg;
namespace kn = tdgwg::kernels;

namespace {

struct Expansion {
  std::vector<cplx> ex, ey, z;
  kn::PlaneWaveExpansion view() const { return {ex, ey, z}; }
};

Expansion random_expansion(int np, bool lossy) {
  Expansion e;
  const cplx kappa = lossy ? 8.0 * std::sqrt(cplx(9.0, 4.0)) : cplx(8.0);
  for (int j = 0; j < np; ++j) {
    const double t = 2 * M_PI * j / np;
    e.ex.push_back(I * kappa * std::cos(t));
    e.ey.push_back(I * kappa * std::sin(t));
    e.z.push_back(oracle::crandom());
  }
  return e;
}

/// Direct evaluation of the expansion and its gradient.
void naive_sum(const Expansion& e, const std::vector<double>& rx, const std::vector<double>& ry,
               std::vector<cplx>& v, std::vector<cplx>& gx, std::vector<cplx>& gy) {
  const std::size_t n = rx.size();
  v.assign(n, 0.0);
  gx.assign(n, 0.0);
  gy.assign(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < e.z.size(); ++j) {
      const cplx t = e.z[j] * std::exp(e.ex[j] * rx[p] + e.ey[j] * ry[p]);
      v[p] += t;
      gx[p] += e.ex[j] * t;
      gy[p] += e.ey[j] * t;
    }
  }
}

double max_rel(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

class KernelIsa : public ::testing::TestWithParam<kn::Isa> {
 protected:
  void SetUp() override {
    if (!kn::isa_available(GetParam())) GTEST_SKIP() << kn::isa_name(GetParam()) << " not available";
  }
};

}  // namespace

TEST_P(KernelIsa, PlaneWaveSumMatchesDirectEvaluation) {
  for (int np : {1, 3, 4, 7, 13, 16, 19}) {
    for (int npts : {1, 2, 3, 4, 5, 8, 31, 64}) {
      for (bool lossy : {false, true}) {
        const Expansion e = random_expansion(np, lossy);
        std::vector<double> rx(npts), ry(npts);
        for (int p = 0; p < npts; ++p) {
          rx[p] = oracle::uniform(-0.2, 0.2);
          ry[p] = oracle::uniform(-0.2, 0.2);
        }
        std::vector<cplx> v(npts), gx(npts), gy(npts), rv, rgx, rgy;
        naive_sum(e, rx, ry, rv, rgx, rgy);
        if (GetParam() == kn::Isa::Avx2) {
          kn::avx2::plane_wave_sum(e.view(), rx, ry, v, gx, gy);
        } else {
          kn::scalar::plane_wave_sum(e.view(), rx, ry, v, gx, gy);
        }
        EXPECT_LE(max_rel(v, rv), 1e-13) << np << " " << npts;
        EXPECT_LE(max_rel(gx, rgx), 1e-13);
        EXPECT_LE(max_rel(gy, rgy), 1e-13);

        // values only
        std::vector<cplx> v2(npts);
        if (GetParam() == kn::Isa::Avx2) {
          kn::avx2::plane_wave_sum(e.view(), rx, ry, v2, {}, {});
        } else {
          kn::scalar::plane_wave_sum(e.view(), rx, ry, v2, {}, {});
        }
        EXPECT_LE(max_rel(v2, rv), 1e-13);
      }
    }
  }
}

TEST_P(KernelIsa, ConjGemmMatchesNaive) {
  for (int rows : {1, 2, 5, 13}) {
    for (int cols : {1, 3, 8}) {
      for (int depth : {1, 2, 3, 7, 45}) {
        std::vector<cplx> X(rows * depth), Y(cols * depth), C(rows * cols), R(rows * cols, 0.0);
        for (auto& x : X) x = oracle::crandom();
        for (auto& y : Y) y = oracle::crandom();
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c)
            for (int l = 0; l < depth; ++l) R[r * cols + c] += std::conj(X[r * depth + l]) * Y[c * depth + l];
        if (GetParam() == kn::Isa::Avx2) {
          kn::avx2::conj_gemm(X, Y, rows, cols, depth, C);
        } else {
          kn::scalar::conj_gemm(X, Y, rows, cols, depth, C);
        }
        EXPECT_LE(max_rel(C, R), 1e-14) << rows << " " << cols << " " << depth;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Isa, KernelIsa, ::testing::Values(kn::Isa::Scalar, kn::Isa::Avx2),
                         [](const auto& info) { return std::string(kn::isa_name(info.param)); });

TEST(Kernels, ScalarAndAvx2Agree) {
  if (!kn::isa_available(kn::Isa::Avx2)) GTEST_SKIP() << "avx2 not available";
  const Expansion e = random_expansion(15, true);
  std::vector<double> rx(37), ry(37);
  for (int p = 0; p < 37; ++p) {
    rx[p] = oracle::uniform(-0.3, 0.3);
    ry[p] = oracle::uniform(-0.3, 0.3);
  }
  std::vector<cplx> a(37), b(37), ax(37), bx(37), ay(37), by(37);
  kn::scalar::plane_wave_sum(e.view(), rx, ry, a, ax, ay);
  kn::avx2::plane_wave_sum(e.view(), rx, ry, b, bx, by);
  EXPECT_LE(max_rel(b, a), 1e-13);
  EXPECT_LE(max_rel(bx, ax), 1e-13);
  EXPECT_LE(max_rel(by, ay), 1e-13);
}

TEST(Kernels, Avx2ExpSincosLanes) {
  if (!kn::isa_available(kn::Isa::Avx2)) GTEST_SKIP() << "avx2 not available";
  std::vector<double> x;
  for (double v = -30.0; v <= 30.0; v += 0.0137) x.push_back(v);
  for (double v : {0.0, -0.0, 1e-300, -700.0, 700.0, M_PI, -M_PI / 2, 1e3 + 0.1}) x.push_back(v);
  std::vector<double> e(x.size()), s(x.size()), c(x.size());
  kn::avx2::exp_sincos(x, e, s, c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_LE(std::abs(e[i] - std::exp(x[i])), 4e-16 * std::exp(x[i]) + 1e-300) << x[i];
    EXPECT_LE(std::abs(s[i] - std::sin(x[i])), 4e-16 * std::max(1.0, std::abs(x[i]) / 30)) << x[i];
    EXPECT_LE(std::abs(c[i] - std::cos(x[i])), 4e-16 * std::max(1.0, std::abs(x[i]) / 30)) << x[i];
  }
}

TEST(Kernels, DispatchSelection) {
  const kn::Isa before = kn::active_isa();
  EXPECT_TRUE(kn::isa_available(kn::Isa::Scalar));
  kn::set_isa(kn::Isa::Scalar);
  EXPECT_EQ(kn::active_isa(), kn::Isa::Scalar);
  if (kn::isa_available(kn::Isa::Avx2)) {
    kn::set_isa(kn::Isa::Avx2);
    EXPECT_EQ(kn::active_isa(), kn::Isa::Avx2);
  } else {
    EXPECT_THROW(kn::set_isa(kn::Isa::Avx2), InvalidArgument);
  }
  kn::set_isa(before);
  EXPECT_STREQ(kn::isa_name(kn::Isa::Scalar), "scalar");
  EXPECT_STREQ(kn::isa_name(kn::Isa::Avx2), "avx2");
}
