#include "tdgwg/basis.hpp"

#include <fmt/format.h>

namespace tdgwg {

std::vector<Vec2> directions(int num_directions) {
  if (num_directions < 3) {
    throw TooFewDirections(fmt::format("N_p = {} < 3", num_directions));
  }
  std::vector<Vec2> d(num_directions);
  for (int j = 0; j < num_directions; ++j) {
    const double a = 2.0 * pi * j / num_directions;
    d[j] = {std::cos(a), std::sin(a)};
  }
  return d;
}

PlaneWaveSpace::PlaneWaveSpace(const Mesh& mesh, double k, int num_directions)
    : k_(k), dirs_(directions(num_directions)) {
  if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
  kappa_.resize(mesh.num_triangles());
  centroid_.resize(mesh.num_triangles());
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    kappa_[K] = k * std::sqrt(mesh.triangle(K).n);
    centroid_[K] = mesh.centroid(K);
  }
}

BasisValue PlaneWaveSpace::eval(int K, int j, Vec2 x) const {
  const PlaneWave w = wave(K, j);
  const cplx v = w.value(x);
  const cplx s = I * w.kappa * v;
  return {v, {s * w.dir.x, s * w.dir.y}};
}

}  // namespace tdgwg
