#pragma once

// Conforming triangle meshes of Omega_R = (-R, R) x (0, H) with facet
// classification, per-triangle refractive index, and the generators used by
// the experiments (uniform, scatterer-conforming, locally refined layer).

#include <array>
#include <iosfwd>
#include <vector>

#include "tdgwg/common.hpp"

namespace tdgwg {

enum class FacetClass { Interior, Wall, TruncationLeft, TruncationRight };

const char* to_string(FacetClass c);

struct Triangle {
  std::array<int, 3> v;
  cplx n{1.0, 0.0};
};

struct Facet {
  std::array<int, 2> v;
  FacetClass cls = FacetClass::Interior;
  /// elem[0] always valid; elem[1] = -1 on the boundary.
  std::array<int, 2> elem{-1, -1};
  /// Unit normal pointing out of elem[0].
  Vec2 normal;
  double length = 0.0;
};

class Mesh {
 public:
  Mesh() = default;
  /// Builds facets and adjacency; throws MeshError if the triangulation is
  /// not conforming, has clockwise or degenerate triangles, or has boundary
  /// facets off the rectangle.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles, double R, double H);

  double R() const { return R_; }
  double H() const { return H_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  const Triangle& triangle(int K) const { return triangles_[K]; }
  const Facet& facet(int f) const { return facets_[f]; }
  /// facet index of edge (v[i], v[(i+1)%3]) of triangle K
  const std::array<int, 3>& triangle_facets(int K) const { return tri_facets_[K]; }

  std::array<Vec2, 3> corners(int K) const;
  Vec2 centroid(int K) const;
  double area(int K) const;
  double diameter(int K) const;
  /// inscribed diameter / diameter
  double chunkiness(int K) const;
  /// Outward unit normal of triangle K on facet f.
  Vec2 outward_normal(int K, int f) const;

  double h() const { return h_; }
  double max_facet_length() const { return ell_max_; }
  double min_facet_length() const { return ell_min_; }
  double min_chunkiness() const;

  int count(FacetClass c) const;

 private:
  void build_topology();

  double R_ = 0.0;
  double H_ = 0.0;
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> tri_facets_;
  double h_ = 0.0;
  double ell_max_ = 0.0;
  double ell_min_ = 0.0;
};

struct Box {
  double x0, x1, y0, y1;
  bool contains(Vec2 p) const { return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1; }
};

/// Structured mesh: an nx x ny grid of rectangles, each split along a diagonal,
/// with nx, ny the smallest counts giving max triangle diameter <= h_target.
Mesh generate_uniform(double R, double H, double h_target);

/// Mesh whose grid lines contain the box edges; triangles inside the box are
/// red-refined until their diameter is <= interior_factor * h_target and carry
/// n = n_inside. Closure outside the box is red-green.
Mesh generate_scatterer_mesh(double R, double H, double h_target, const Box& box,
                             cplx n_inside, double interior_factor);

struct LayerMesh {
  Mesh mesh;
  /// achieved longest / shortest edge length
  double edge_ratio = 1.0;
};

/// Uniform mesh whose triangles meeting the layer x0 <= x_1 <= x1 are refined
/// `levels` times (red refinement, red-green closure).
LayerMesh generate_layer_refined(double R, double H, double h_coarse, double layer_x0,
                                 double layer_x1, int levels);

/// One round of red refinement of the marked triangles with conforming
/// red-green closure.
Mesh refine(const Mesh& mesh, const std::vector<bool>& marked);

/// Bucketed point-in-triangle search.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  /// Triangle containing p (ties resolved to the lowest index), or -1.
  int locate(Vec2 p) const;

 private:
  const Mesh* mesh_;
  double x0_, y0_, dx_, dy_;
  int nx_, ny_;
  std::vector<std::vector<int>> buckets_;
};

void write_mesh(std::ostream& os, const Mesh& mesh);
/// Reads the text format; the rectangle (-R, R) x (0, H) is inferred from the
/// vertex bounding box.
Mesh read_mesh(std::istream& is);

}  // namespace tdgwg
