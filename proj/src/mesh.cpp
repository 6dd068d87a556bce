#include "tdgwg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

namespace tdgwg {

const char* to_string(FacetClass c) {
  switch (c) {
    case FacetClass::Interior: return "interior";
    case FacetClass::Wall: return "wall";
    case FacetClass::TruncationLeft: return "truncation-left";
    case FacetClass::TruncationRight: return "truncation-right";
  }
  return "?";
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles, double R, double H)
    : R_(R), H_(H), vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (!(R > 0.0) || !(H > 0.0)) throw MeshError("domain extents must be positive");
  build_topology();
}

void Mesh::build_topology() {
  const double tol = 1e-12 * std::max(R_, H_);
  for (std::size_t K = 0; K < triangles_.size(); ++K) {
    const auto& t = triangles_[K];
    for (int v : t.v) {
      if (v < 0 || v >= num_vertices()) throw MeshError(fmt::format("triangle {} has bad vertex", K));
    }
    if (signed_area(vertices_[t.v[0]], vertices_[t.v[1]], vertices_[t.v[2]]) <= 0.0) {
      throw MeshError(fmt::format("triangle {} is clockwise or degenerate", K));
    }
    if (!(t.n.real() > 0.0) || t.n.imag() < 0.0) {
      throw MeshError(fmt::format("triangle {} has inadmissible refractive index", K));
    }
  }

  facets_.clear();
  tri_facets_.assign(triangles_.size(), {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(triangles_.size() * 2);
  for (int K = 0; K < num_triangles(); ++K) {
    const auto& t = triangles_[K];
    for (int i = 0; i < 3; ++i) {
      const int a = t.v[i];
      const int b = t.v[(i + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_facets());
      if (inserted) {
        Facet f;
        f.v = {a, b};
        f.elem = {K, -1};
        const Vec2 e = vertices_[b] - vertices_[a];
        f.length = norm(e);
        // counterclockwise triangle: outward normal is the edge rotated clockwise
        f.normal = {e.y / f.length, -e.x / f.length};
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.elem[1] != -1) {
          throw MeshError(fmt::format("edge ({}, {}) shared by more than two triangles", a, b));
        }
        if (f.v[0] != b || f.v[1] != a) {
          throw MeshError(fmt::format("inconsistent orientation across edge ({}, {})", a, b));
        }
        f.elem[1] = K;
      }
      tri_facets_[K][i] = it->second;
    }
  }

  auto on = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  for (auto& f : facets_) {
    if (f.elem[1] >= 0) {
      f.cls = FacetClass::Interior;
      continue;
    }
    const Vec2 p = vertices_[f.v[0]];
    const Vec2 q = vertices_[f.v[1]];
    if (on(p.x, -R_) && on(q.x, -R_)) {
      f.cls = FacetClass::TruncationLeft;
    } else if (on(p.x, R_) && on(q.x, R_)) {
      f.cls = FacetClass::TruncationRight;
    } else if ((on(p.y, 0.0) && on(q.y, 0.0)) || (on(p.y, H_) && on(q.y, H_))) {
      f.cls = FacetClass::Wall;
    } else {
      throw MeshError(fmt::format("boundary edge ({}, {}) is not on the rectangle; hanging node?",
                                  f.v[0], f.v[1]));
    }
  }

  h_ = 0.0;
  ell_max_ = 0.0;
  ell_min_ = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) {
    ell_max_ = std::max(ell_max_, f.length);
    ell_min_ = std::min(ell_min_, f.length);
  }
  for (int K = 0; K < num_triangles(); ++K) h_ = std::max(h_, diameter(K));
}

std::array<Vec2, 3> Mesh::corners(int K) const {
  const auto& t = triangles_[K];
  return {vertices_[t.v[0]], vertices_[t.v[1]], vertices_[t.v[2]]};
}

Vec2 Mesh::centroid(int K) const {
  const auto c = corners(K);
  return {(c[0].x + c[1].x + c[2].x) / 3.0, (c[0].y + c[1].y + c[2].y) / 3.0};
}

double Mesh::area(int K) const {
  const auto c = corners(K);
  return signed_area(c[0], c[1], c[2]);
}

double Mesh::diameter(int K) const {
  const auto c = corners(K);
  return std::max({norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
}

double Mesh::chunkiness(int K) const {
  const auto c = corners(K);
  const double perimeter = norm(c[1] - c[0]) + norm(c[2] - c[1]) + norm(c[0] - c[2]);
  return 4.0 * area(K) / perimeter / diameter(K);
}

Vec2 Mesh::outward_normal(int K, int f) const {
  const Facet& F = facets_[f];
  if (F.elem[0] == K) return F.normal;
  if (F.elem[1] == K) return -1.0 * F.normal;
  throw InvalidArgument(fmt::format("triangle {} is not adjacent to facet {}", K, f));
}

double Mesh::min_chunkiness() const {
  double s = std::numeric_limits<double>::infinity();
  for (int K = 0; K < num_triangles(); ++K) s = std::min(s, chunkiness(K));
  return s;
}

int Mesh::count(FacetClass c) const {
  return static_cast<int>(
      std::count_if(facets_.begin(), facets_.end(), [c](const Facet& f) { return f.cls == c; }));
}

namespace {

std::vector<double> subdivide(const std::vector<double>& breaks, double spacing) {
  std::vector<double> out{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / spacing - 1e-12)));
    for (int m = 1; m < n; ++m) out.push_back(a + (b - a) * m / n);
    out.push_back(b);
  }
  return out;
}

Mesh grid_mesh(const std::vector<double>& xs, const std::vector<double>& ys, double R, double H) {
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.push_back({xs[i], ys[j]});
  std::vector<Triangle> triangles;
  triangles.reserve(2 * nx * ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      triangles.push_back({{a, b, c}});
      triangles.push_back({{a, c, d}});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), R, H);
}

void check_extents(double R, double H, double h) {
  if (!(R > 0.0) || !(H > 0.0) || !(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("R, H and h_target must be positive and finite");
  }
  if (h >= std::hypot(2.0 * R, H)) {
    throw DegenerateRequest(fmt::format(
        "h_target = {} does not resolve the {} x {} domain", h, 2.0 * R, H));
  }
}

}  // namespace

Mesh generate_uniform(double R, double H, double h_target) {
  check_extents(R, H, h_target);
  const double spacing = h_target / std::sqrt(2.0);
  return grid_mesh(subdivide({-R, R}, spacing), subdivide({0.0, H}, spacing), R, H);
}

Mesh refine(const Mesh& mesh, const std::vector<bool>& marked) {
  if (static_cast<int>(marked.size()) != mesh.num_triangles()) {
    throw DimensionMismatch("marker size differs from the triangle count");
  }
  const int nt = mesh.num_triangles();
  std::vector<bool> red = marked;
  std::vector<bool> split(mesh.num_facets(), false);
  for (int K = 0; K < nt; ++K)
    if (red[K])
      for (int f : mesh.triangle_facets(K)) split[f] = true;

  // Closure: a triangle with two or more split edges becomes red.
  for (bool changed = true; changed;) {
    changed = false;
    for (int K = 0; K < nt; ++K) {
      if (red[K]) continue;
      int n = 0;
      for (int f : mesh.triangle_facets(K)) n += split[f] ? 1 : 0;
      if (n >= 2) {
        red[K] = true;
        changed = true;
        for (int f : mesh.triangle_facets(K)) split[f] = true;
      }
    }
  }

  std::vector<Vec2> vertices = mesh.vertices();
  std::vector<int> midpoint(mesh.num_facets(), -1);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!split[f]) continue;
    const auto& F = mesh.facet(f);
    midpoint[f] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(F.v[0]) + mesh.vertex(F.v[1])));
  }

  std::vector<Triangle> triangles;
  triangles.reserve(4 * nt);
  for (int K = 0; K < nt; ++K) {
    const auto& t = mesh.triangle(K);
    const auto& tf = mesh.triangle_facets(K);
    if (red[K]) {
      const int m0 = midpoint[tf[0]], m1 = midpoint[tf[1]], m2 = midpoint[tf[2]];
      triangles.push_back({{t.v[0], m0, m2}, t.n});
      triangles.push_back({{m0, t.v[1], m1}, t.n});
      triangles.push_back({{m2, m1, t.v[2]}, t.n});
      triangles.push_back({{m0, m1, m2}, t.n});
      continue;
    }
    int e = -1;
    for (int i = 0; i < 3; ++i)
      if (split[tf[i]]) e = i;
    if (e < 0) {
      triangles.push_back(t);
      continue;
    }
    // green: bisect edge e from the opposite vertex
    const int a = t.v[e], b = t.v[(e + 1) % 3], c = t.v[(e + 2) % 3];
    const int m = midpoint[tf[e]];
    triangles.push_back({{a, m, c}, t.n});
    triangles.push_back({{m, b, c}, t.n});
  }
  return Mesh(std::move(vertices), std::move(triangles), mesh.R(), mesh.H());
}

Mesh generate_scatterer_mesh(double R, double H, double h_target, const Box& box,
                             cplx n_inside, double interior_factor) {
  check_extents(R, H, h_target);
  if (!(box.x0 > -R && box.x0 < box.x1 && box.x1 < R && box.y0 > 0.0 && box.y0 < box.y1 &&
        box.y1 < H)) {
    throw BoxTouchesBoundary("scatterer box must lie strictly inside the domain");
  }
  if (!(interior_factor > 0.0 && interior_factor <= 1.0)) {
    throw InvalidArgument("interior_factor must lie in (0, 1]");
  }
  if (!(n_inside.real() > 0.0) || n_inside.imag() < 0.0) {
    throw InvalidArgument("n_inside needs Re(n) > 0 and Im(n) >= 0");
  }
  const double spacing = h_target / std::sqrt(2.0);
  Mesh mesh = grid_mesh(subdivide({-R, box.x0, box.x1, R}, spacing),
                        subdivide({0.0, box.y0, box.y1, H}, spacing), R, H);

  const double target = interior_factor * h_target * (1.0 + 1e-12);
  for (;;) {
    std::vector<bool> inside(mesh.num_triangles());
    double worst = 0.0;
    for (int K = 0; K < mesh.num_triangles(); ++K) {
      inside[K] = box.contains(mesh.centroid(K));
      if (inside[K]) worst = std::max(worst, mesh.diameter(K));
    }
    if (worst <= target) break;
    mesh = refine(mesh, inside);
  }

  std::vector<Triangle> triangles = mesh.triangles();
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    if (box.contains(mesh.centroid(K))) triangles[K].n = n_inside;
  }
  return Mesh(mesh.vertices(), std::move(triangles), R, H);
}

LayerMesh generate_layer_refined(double R, double H, double h_coarse, double layer_x0,
                                 double layer_x1, int levels) {
  if (levels < 1) throw InvalidArgument("refine_levels must be >= 1");
  if (!(layer_x0 > -R && layer_x1 < R && layer_x0 <= layer_x1)) {
    throw InvalidArgument("layer must lie strictly inside (-R, R)");
  }
  Mesh mesh = generate_uniform(R, H, h_coarse);
  for (int level = 0; level < levels; ++level) {
    std::vector<bool> marked(mesh.num_triangles(), false);
    bool any = false;
    for (int K = 0; K < mesh.num_triangles(); ++K) {
      const auto c = mesh.corners(K);
      const double lo = std::min({c[0].x, c[1].x, c[2].x});
      const double hi = std::max({c[0].x, c[1].x, c[2].x});
      if (std::max(lo, layer_x0) < std::min(hi, layer_x1)) {
        marked[K] = true;
        any = true;
      }
    }
    if (!any) break;
    mesh = refine(mesh, marked);
  }
  LayerMesh out{mesh, mesh.max_facet_length() / mesh.min_facet_length()};
  return out;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  x0_ = -mesh.R();
  y0_ = 0.0;
  const int n = std::max(1, static_cast<int>(std::sqrt(mesh.num_triangles() / 2.0)));
  nx_ = std::max(1, static_cast<int>(std::round(n * 2.0 * mesh.R() / std::max(2.0 * mesh.R(), mesh.H()))));
  ny_ = std::max(1, static_cast<int>(std::round(n * mesh.H() / std::max(2.0 * mesh.R(), mesh.H()))));
  dx_ = 2.0 * mesh.R() / nx_;
  dy_ = mesh.H() / ny_;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    const auto c = mesh.corners(K);
    const double lo_x = std::min({c[0].x, c[1].x, c[2].x});
    const double hi_x = std::max({c[0].x, c[1].x, c[2].x});
    const double lo_y = std::min({c[0].y, c[1].y, c[2].y});
    const double hi_y = std::max({c[0].y, c[1].y, c[2].y});
    const int i0 = std::clamp(static_cast<int>(std::floor((lo_x - x0_) / dx_)), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor((hi_x - x0_) / dx_)), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((lo_y - y0_) / dy_)), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor((hi_y - y0_) / dy_)), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(K);
  }
}

int PointLocator::locate(Vec2 p) const {
  const double tol = 1e-12 * std::max(2.0 * mesh_->R(), mesh_->H());
  if (p.x < x0_ - tol || p.x > -x0_ + tol || p.y < y0_ - tol || p.y > mesh_->H() + tol) return -1;
  const int i = std::clamp(static_cast<int>(std::floor((p.x - x0_) / dx_)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y - y0_) / dy_)), 0, ny_ - 1);
  for (int K : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto c = mesh_->corners(K);
    bool inside = true;
    for (int e = 0; e < 3 && inside; ++e) {
      const Vec2 a = c[e];
      const Vec2 b = c[(e + 1) % 3];
      // signed distance of p from edge ab, positive inside
      if (cross(b - a, p - a) / norm(b - a) < -tol) inside = false;
    }
    if (inside) return K;  // bucket lists are in increasing K
  }
  return -1;
}

}  // namespace tdgwg
