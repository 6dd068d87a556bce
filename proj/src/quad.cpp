#include "tdgwg/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace tdgwg {

namespace {

Rule1D build_gauss_legendre(int q) {
  Rule1D r;
  r.nodes.resize(q);
  r.weights.resize(q);
  // Newton on P_q starting from the Chebyshev-like guess; symmetric pairs.
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int n = 1; n <= q; ++n) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p2) / n;
      }
      dp = q * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int n = 1; n <= q; ++n) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p2) / n;
      }
      dp = q * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1, 1] -> [0, 1]
    r.nodes[i] = 0.5 * (1.0 - z);
    r.nodes[q - 1 - i] = 0.5 * (1.0 + z);
    r.weights[i] = r.weights[q - 1 - i] = 0.5 * w;
  }
  return r;
}

struct GaussTable {
  std::array<Rule1D, kMaxGaussNodes + 1> rules;
  GaussTable() {
    for (int q = 1; q <= kMaxGaussNodes; ++q) rules[q] = build_gauss_legendre(q);
  }
};

cplx pair_phase(const PlaneWave& trial, const PlaneWave& test, Vec2 p) {
  return I * trial.kappa * dot(trial.dir, p - trial.origin) -
         I * std::conj(test.kappa) * dot(test.dir, p - test.origin);
}

CVec2 pair_exponent(const PlaneWave& trial, const PlaneWave& test) {
  const cplx s = I * trial.kappa;
  const cplx t = -I * std::conj(test.kappa);
  return {s * trial.dir.x + t * test.dir.x, s * trial.dir.y + t * test.dir.y};
}

double triangle_diameter(Vec2 a, Vec2 b, Vec2 c) {
  return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

}  // namespace

const Rule1D& gauss_legendre(int q) {
  if (q < 1 || q > kMaxGaussNodes) {
    throw InvalidArgument(fmt::format("Gauss rule with {} nodes not available", q));
  }
  static const GaussTable table;
  return table.rules[q];
}

SegmentRule segment_rule(Vec2 a, Vec2 b, int q) {
  const Rule1D& g = gauss_legendre(q);
  const double len = norm(b - a);
  SegmentRule r;
  r.order = 2 * q - 1;
  r.nodes.resize(q);
  r.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    r.nodes[i] = a + g.nodes[i] * (b - a);
    r.weights[i] = g.weights[i] * len;
  }
  return r;
}

TriangleRule triangle_rule(Vec2 a, Vec2 b, Vec2 c, int q) {
  const Rule1D& g = gauss_legendre(q);
  const double area2 = std::abs(cross(b - a, c - a));
  TriangleRule r;
  r.order = 2 * q - 2;
  r.nodes.reserve(q * q);
  r.weights.reserve(q * q);
  // x = a + u (b - a) + u v (c - b), Jacobian 2|K| u
  for (int i = 0; i < q; ++i) {
    const double u = g.nodes[i];
    for (int j = 0; j < q; ++j) {
      const double v = g.nodes[j];
      r.nodes.push_back(a + u * (b - a) + (u * v) * (c - b));
      r.weights.push_back(g.weights[i] * g.weights[j] * area2 * u);
    }
  }
  return r;
}

cplx exprel(cplx w) {
  if (std::abs(w) < 1e-6) return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0));
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  const cplx em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / w;
}

cplx segment_exp_integral(const CVec2& c, Vec2 a, Vec2 b) {
  return std::exp(dot(c, a)) * norm(b - a) * exprel(dot(c, b - a));
}

cplx segment_exp_integral(const CVec2& c, Vec2 a, Vec2 b, Vec2 origin) {
  return std::exp(dot(c, a - origin)) * norm(b - a) * exprel(dot(c, b - a));
}

cplx facet_pair_integral(const PlaneWave& trial, const PlaneWave& test, Vec2 a, Vec2 b,
                         Vec2 normal, TraceProduct kind) {
  const CVec2 c = pair_exponent(trial, test);
  cplx base = std::exp(pair_phase(trial, test, a)) * norm(b - a) * exprel(dot(c, b - a));
  switch (kind) {
    case TraceProduct::ValueValue: return base;
    case TraceProduct::ValueNormal: return base * std::conj(test.normal_factor(normal));
    case TraceProduct::NormalNormal:
      return base * trial.normal_factor(normal) * std::conj(test.normal_factor(normal));
  }
  return base;
}

cplx triangle_pair_integral_closed(const PlaneWave& trial, const PlaneWave& test, Vec2 a,
                                   Vec2 b, Vec2 c) {
  const CVec2 e = pair_exponent(trial, test);
  const double e2 = std::norm(e.x) + std::norm(e.y);
  if (e2 == 0.0) throw InvalidArgument("closed form needs a nonzero combined exponent");
  // exp(e . x) = div(v exp(e . x)) with v = conj(e) / |e|^2
  const CVec2 v{std::conj(e.x) / e2, std::conj(e.y) / e2};
  const std::array<Vec2, 3> p{a, b, c};
  cplx sum{};
  for (int i = 0; i < 3; ++i) {
    const Vec2 p0 = p[i];
    const Vec2 p1 = p[(i + 1) % 3];
    const Vec2 t = p1 - p0;
    const double len = norm(t);
    const Vec2 n{t.y / len, -t.x / len};  // outward when the corners are counterclockwise
    const cplx vn = v.x * n.x + v.y * n.y;
    sum += vn * std::exp(dot(e, p0 - a)) * len * exprel(dot(e, t));
  }
  const double orientation = cross(b - a, c - a) > 0.0 ? 1.0 : -1.0;
  return orientation * std::exp(pair_phase(trial, test, a)) * sum;
}

cplx triangle_pair_integral_quadrature(const PlaneWave& trial, const PlaneWave& test, Vec2 a,
                                       Vec2 b, Vec2 c, int extra_order) {
  const double hk = triangle_diameter(a, b, c);
  const double kap = std::max(std::abs(trial.kappa), std::abs(test.kappa));
  const int q = std::min(kMaxGaussNodes, static_cast<int>(std::ceil(kap * hk)) + 8 + extra_order);
  const TriangleRule rule = triangle_rule(a, b, c, q);
  const CVec2 e = pair_exponent(trial, test);
  cplx sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * std::exp(dot(e, rule.nodes[i] - a));
  }
  return std::exp(pair_phase(trial, test, a)) * sum;
}

cplx triangle_pair_integral(const PlaneWave& trial, const PlaneWave& test, Vec2 a, Vec2 b,
                            Vec2 c) {
  const CVec2 e = pair_exponent(trial, test);
  const double mag = norm(e);
  if (mag == 0.0) return std::exp(pair_phase(trial, test, a)) * 0.5 * std::abs(cross(b - a, c - a));
  if (mag * triangle_diameter(a, b, c) >= 1.0) return triangle_pair_integral_closed(trial, test, a, b, c);
  return triangle_pair_integral_quadrature(trial, test, a, b, c);
}

namespace {

void check_on_wall(Vec2 a, Vec2 b, double wall_x) {
  const double tol = 1e-12 * std::max(1.0, std::abs(wall_x));
  if (std::abs(a.x - wall_x) > tol || std::abs(b.x - wall_x) > tol) {
    throw FacetNotOnTruncation(
        fmt::format("segment ({}, {})-({}, {}) is not on x = {}", a.x, a.y, b.x, b.y, wall_x));
  }
}

cplx moment_unchecked(const PlaneWave& w, Vec2 a, Vec2 b, const ModalBasis& basis, int j) {
  const CVec2 c = w.exponent();
  if (j == 0) return basis.amplitude(0) * segment_exp_integral(c, a, b, w.origin);
  // cos(k_j y) = (exp(i k_j y) + exp(-i k_j y)) / 2, written relative to the origin
  const double kj = basis.transverse(j);
  const cplx shift = std::exp(I * kj * w.origin.y);
  const CVec2 up{c.x, c.y + I * kj};
  const CVec2 down{c.x, c.y - I * kj};
  return 0.5 * basis.amplitude(j) *
         (shift * segment_exp_integral(up, a, b, w.origin) +
          std::conj(shift) * segment_exp_integral(down, a, b, w.origin));
}

}  // namespace

cplx modal_moment(const PlaneWave& w, Vec2 a, Vec2 b, double wall_x, const ModalBasis& basis,
                  int j, bool normal_derivative, Vec2 normal) {
  check_on_wall(a, b, wall_x);
  if (j < 0 || j >= basis.count()) throw InvalidArgument("mode index out of range");
  const cplx m = moment_unchecked(w, a, b, basis, j);
  return normal_derivative ? w.normal_factor(normal) * m : m;
}

void modal_moments(const PlaneWave& w, Vec2 a, Vec2 b, double wall_x, const ModalBasis& basis,
                   std::span<cplx> out) {
  check_on_wall(a, b, wall_x);
  if (static_cast<int>(out.size()) > basis.count()) throw InvalidArgument("too many modes requested");
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = moment_unchecked(w, a, b, basis, static_cast<int>(j));
}

}  // namespace tdgwg
