#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "tdgwg/mesh.hpp"

namespace tdgwg {

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) os << fmt::format("{:.17g} {:.17g}\n", v.x, v.y);
  os << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) {
    os << fmt::format("{} {} {} {:.17g} {:.17g}\n", t.v[0], t.v[1], t.v[2], t.n.real(),
                      t.n.imag());
  }
}

namespace {

void expect(std::istream& is, const std::string& keyword, long& count) {
  std::string word;
  if (!(is >> word >> count) || word != keyword || count < 0) {
    throw MeshError(fmt::format("expected header '{} N'", keyword));
  }
}

}  // namespace

Mesh read_mesh(std::istream& is) {
  long nv = 0;
  expect(is, "vertices", nv);
  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) {
    if (!(is >> v.x >> v.y)) throw MeshError("truncated vertex list");
  }
  long nt = 0;
  expect(is, "triangles", nt);
  std::vector<Triangle> triangles(nt);
  for (auto& t : triangles) {
    double re = 0.0, im = 0.0;
    if (!(is >> t.v[0] >> t.v[1] >> t.v[2] >> re >> im)) throw MeshError("truncated triangle list");
    t.n = {re, im};
    for (int v : t.v)
      if (v < 0 || v >= nv) throw MeshError("vertex index out of range");
    const Vec2 a = vertices[t.v[0]], b = vertices[t.v[1]], c = vertices[t.v[2]];
    if (cross(b - a, c - a) < 0.0) std::swap(t.v[1], t.v[2]);
  }
  if (vertices.empty()) throw MeshError("mesh has no vertices");

  double xmin = vertices[0].x, xmax = xmin, ymin = vertices[0].y, ymax = ymin;
  for (const auto& v : vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double tol = 1e-12 * std::max(xmax - xmin, ymax - ymin);
  if (std::abs(xmin + xmax) > tol || std::abs(ymin) > tol) {
    throw MeshError("mesh must cover (-R, R) x (0, H)");
  }
  return Mesh(std::move(vertices), std::move(triangles), xmax, ymax);
}

}  // namespace tdgwg
