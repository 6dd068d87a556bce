#pragma once

#include <vector>

#include "tdgwg/common.hpp"
#include "tdgwg/mesh.hpp"

namespace tdgwg {

/// d_j = (cos 2 pi j / N_p, sin 2 pi j / N_p), j = 0..N_p-1.
std::vector<Vec2> directions(int num_directions);

/// A plane wave exp(i kappa d . (x - origin)); kappa is complex in lossy cells.
struct PlaneWave {
  cplx kappa;
  Vec2 dir;
  Vec2 origin;

  /// Exponent vector c with phi(x) = exp(c . (x - origin)).
  CVec2 exponent() const { return {I * kappa * dir.x, I * kappa * dir.y}; }
  cplx value(Vec2 x) const { return std::exp(I * kappa * dot(dir, x - origin)); }
  /// Factor alpha with (grad phi . n) = alpha phi.
  cplx normal_factor(Vec2 n) const { return I * kappa * dot(dir, n); }
};

struct BasisValue {
  cplx value;
  CVec2 gradient;
};

/// Per-element plane-wave Trefftz space with the same direction set on every
/// element. Degrees of freedom are element-major: dof(K, j) = K * N_p + j.
class PlaneWaveSpace {
 public:
  PlaneWaveSpace(const Mesh& mesh, double k, int num_directions);

  double k() const { return k_; }
  int num_directions() const { return static_cast<int>(dirs_.size()); }
  int num_elements() const { return static_cast<int>(kappa_.size()); }
  int num_dofs() const { return num_elements() * num_directions(); }
  int dof(int K, int j) const { return K * num_directions() + j; }

  const std::vector<Vec2>& dirs() const { return dirs_; }
  /// k sqrt(n_K), principal branch.
  cplx wavenumber(int K) const { return kappa_[K]; }
  Vec2 centroid(int K) const { return centroid_[K]; }
  PlaneWave wave(int K, int j) const { return {kappa_[K], dirs_[j], centroid_[K]}; }

  BasisValue eval(int K, int j, Vec2 x) const;

 private:
  double k_;
  std::vector<Vec2> dirs_;
  std::vector<cplx> kappa_;
  std::vector<Vec2> centroid_;
};

}  // namespace tdgwg
