#pragma once

// Direct solution of the assembled system, evaluation of the discrete field,
// and L^2 error measures.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tdgwg/assembly.hpp"
#include "tdgwg/basis.hpp"
#include "tdgwg/mesh.hpp"
#include "tdgwg/modal.hpp"

namespace tdgwg {

struct LinearSolution {
  Eigen::VectorXcd z;
  /// ||A z - b|| / (||A||_F ||z|| + ||b||)
  double residual = 0.0;
  /// max |U_ii| / min |U_ii| of the LU factors
  double cond_indicator = 0.0;
};

/// Sparse LU with partial pivoting (UMFPACK when built with it, Eigen
/// SparseLU otherwise) followed by up to two steps of iterative
/// refinement. Throws SingularSystem on breakdown.
LinearSolution solve_system(const TDGSystem& system);

struct SolutionMeta {
  double k = 0.0;
  int num_directions = 0;
  int num_modes = 0;
  double gamma = 0.0;
  double h = 0.0;
};

/// u_h = sum_{K,j} z_{K,j} phi_{K,j}.
class SolutionField {
 public:
  SolutionField(std::shared_ptr<const Mesh> mesh, const PlaneWaveSpace& space,
                Eigen::VectorXcd coeffs, SolutionMeta meta);

  const Mesh& mesh() const { return *mesh_; }
  const PlaneWaveSpace& space() const { return space_; }
  const Eigen::VectorXcd& coefficients() const { return z_; }
  const SolutionMeta& meta() const { return meta_; }

  double residual = 0.0;
  double cond_indicator = 0.0;

  /// Throws PointOutsideMesh. grads may be empty.
  void evaluate(std::span<const Vec2> points, std::span<cplx> values,
                std::span<CVec2> grads = {}) const;
  cplx value(Vec2 p) const;
  CVec2 grad(Vec2 p) const;

  /// Evaluates the expansion of element K (no point location).
  void evaluate_on(int K, std::span<const Vec2> points, std::span<cplx> values,
                   std::span<CVec2> grads = {}) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  PlaneWaveSpace space_;
  Eigen::VectorXcd z_;
  SolutionMeta meta_;
  PointLocator locator_;
  std::vector<cplx> ex_, ey_;  // per element and direction: i kappa_K d_j
};

SolutionField solve(const TDGSystem& system, std::shared_ptr<const Mesh> mesh,
                    const PlaneWaveSpace& space, SolutionMeta meta);

using ReferenceFn = std::function<void(std::span<const Vec2>, std::span<cplx>)>;

ReferenceFn reference_of(const Field& field);
ReferenceFn reference_of(const SolutionField& field);

/// ||u - u_h|| / ||u|| over Omega_R with the Duffy rule of order
/// ceil(|kappa_K| h_K) + 8 + extra_order on each triangle. Throws ZeroReference.
double relative_l2_error(const SolutionField& field, const ReferenceFn& reference,
                         int extra_order = 0);

/// Relative L^2 error of the element-wise least-squares projection of the
/// reference onto the plane-wave space.
double best_approximation_error(const Mesh& mesh, const PlaneWaveSpace& space,
                                const ReferenceFn& reference, int extra_order = 0);

/// Text table "x y re(u) im(u)" on an nx x ny grid covering the closed domain.
void write_field_grid(std::ostream& os, const SolutionField& field, int nx, int ny);

}  // namespace tdgwg
