#pragma once

// Integration of products of plane waves (and modal cosines) over segments
// and triangles. Closed forms are the default path; Gauss rules back the
// degenerate cases and serve as a cross-check.

#include <span>
#include <vector>

#include "tdgwg/basis.hpp"
#include "tdgwg/common.hpp"
#include "tdgwg/modal.hpp"

namespace tdgwg {

/// Gauss-Legendre rule with q nodes on [0, 1]. Tables are built once and
/// shared; valid for 1 <= q <= kMaxGaussNodes.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussNodes = 128;

const Rule1D& gauss_legendre(int q);

struct SegmentRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  int order = 0;
};

struct TriangleRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  int order = 0;
};

SegmentRule segment_rule(Vec2 a, Vec2 b, int q);
/// Collapsed (Duffy) tensor rule with q x q nodes; exact for total degree 2q - 2.
TriangleRule triangle_rule(Vec2 a, Vec2 b, Vec2 c, int q);

/// (exp(w) - 1) / w without cancellation; cubic Taylor series for |w| < 1e-6.
cplx exprel(cplx w);

/// int_0^1 exp(c . (a + t (b - a))) |b - a| dt
cplx segment_exp_integral(const CVec2& c, Vec2 a, Vec2 b);

/// Same integral of exp(c . (x - origin)); the phase is taken at a, which
/// keeps the exponent small when origin is near the segment.
cplx segment_exp_integral(const CVec2& c, Vec2 a, Vec2 b, Vec2 origin);

enum class TraceProduct { ValueValue, ValueNormal, NormalNormal };

/// Exact facet integral of trial-trace times conj(test-trace), where the
/// traces are values or normal derivatives (with respect to `normal`).
cplx facet_pair_integral(const PlaneWave& trial, const PlaneWave& test, Vec2 a, Vec2 b,
                         Vec2 normal, TraceProduct kind);

/// int_K trial conj(test) dx: divergence-theorem reduction to the three edges
/// when |c| h_K >= 1 (c the combined exponent), Gauss otherwise.
cplx triangle_pair_integral(const PlaneWave& trial, const PlaneWave& test, Vec2 a, Vec2 b,
                            Vec2 c);
/// Same integral by the Duffy rule of order q = ceil(|kappa| h_K) + 8 (+ extra).
cplx triangle_pair_integral_quadrature(const PlaneWave& trial, const PlaneWave& test, Vec2 a,
                                       Vec2 b, Vec2 c, int extra_order = 0);
/// Divergence-theorem path only; requires a nonzero combined exponent.
cplx triangle_pair_integral_closed(const PlaneWave& trial, const PlaneWave& test, Vec2 a,
                                   Vec2 b, Vec2 c);

/// int_{[a,b]} phi theta_j dy on the wall x_1 = wall_x (normal derivative
/// trace when normal_derivative, using the given normal). Throws
/// FacetNotOnTruncation if the segment is not on the wall.
cplx modal_moment(const PlaneWave& w, Vec2 a, Vec2 b, double wall_x, const ModalBasis& basis,
                  int j, bool normal_derivative = false, Vec2 normal = {1.0, 0.0});

/// Value moments for modes 0..out.size()-1.
void modal_moments(const PlaneWave& w, Vec2 a, Vec2 b, double wall_x, const ModalBasis& basis,
                   std::span<cplx> out);

}  // namespace tdgwg
