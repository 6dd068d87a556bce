#pragma once

// Global linear system of the plane-wave Trefftz DG discretization with the
// modal NtD coupling on the truncation walls and the volume loss term.

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tdgwg/basis.hpp"
#include "tdgwg/mesh.hpp"
#include "tdgwg/modal.hpp"

namespace tdgwg {

/// Per-facet flux weights: a = b on interior facets, d1 on Gamma_R, d2 on S_R.
/// a(e) = (1 + gamma (l_max / l_e - 1)) / 2, same formula for d1; d2 = 1/2.
class FluxParameters {
 public:
  FluxParameters(double gamma, std::vector<double> per_facet)
      : gamma_(gamma), value_(std::move(per_facet)) {}

  double gamma() const { return gamma_; }
  double a(int f) const { return value_[f]; }
  double b(int f) const { return value_[f]; }
  double d1(int f) const { return value_[f]; }
  double d2(int f) const { return value_[f]; }
  const std::vector<double>& values() const { return value_; }

 private:
  double gamma_;
  std::vector<double> value_;
};

/// (1 + gamma (length_ratio - 1)) / 2 with length_ratio = l_max / l_e.
double flux_weight(double gamma, double length_ratio);

/// Throws NegativeGamma for gamma < 0.
FluxParameters flux_parameters(const Mesh& mesh, double gamma);

struct TDGSystem {
  Eigen::SparseMatrix<cplx> A;  // row = test function, column = trial function
  Eigen::VectorXcd b;
  int num_directions = 0;
  int num_modes = 0;  // NtD truncation M

  int size() const { return static_cast<int>(b.size()); }
};

/// Assembles A_h and L_h. `num_modes` is the NtD truncation M; the incident
/// wall data enters through its first M modal coefficients. Requires
/// modal.spectrum.count() >= num_modes.
TDGSystem assemble(const Mesh& mesh, const PlaneWaveSpace& space, const Modal& modal,
                   const FluxParameters& params, int num_modes, const Field& incident);

/// Coordinate text dump: header "rows cols nnz", then one "row col re im"
/// line per stored entry (0-based, column-major order, %.17g).
void write_matrix(std::ostream& os, const TDGSystem& system);

/// z^H A z
cplx quadratic_form(const TDGSystem& system, const Eigen::VectorXcd& z);

/// sqrt(max(Im z^H A z, 0))
double mesh_norm(const TDGSystem& system, const Eigen::VectorXcd& z);

/// Per-dof modal moments of the basis functions on one truncation wall.
struct WallMoments {
  std::vector<int> dofs;
  /// value moments, row-major [dofs.size()][modes]
  std::vector<cplx> value;
  /// normal-derivative moments, same layout
  std::vector<cplx> normal;
  int modes = 0;
};

WallMoments wall_moments(const Mesh& mesh, const PlaneWaveSpace& space, const ModalBasis& basis,
                         Wall wall, int num_modes);

}  // namespace tdgwg
