#pragma once

// Cross-section modes of the hard-walled guide (0, H), longitudinal
// wavenumbers, the modal Neumann-to-Dirichlet map, and the analytic fields
// (guided modes, truncated Green's function) used as incident/reference data.

#include <memory>
#include <span>
#include <vector>

#include "tdgwg/common.hpp"

namespace tdgwg {

/// Neumann eigenpairs of -d^2/dy^2 on (0, H): k_j = j pi / H and
/// theta_j = amplitude_j cos(k_j y), orthonormal in L^2(0, H).
class ModalBasis {
 public:
  ModalBasis(double height, int count);

  double height() const { return height_; }
  int count() const { return static_cast<int>(transverse_.size()); }
  double transverse(int j) const { return transverse_.at(j); }
  double amplitude(int j) const { return amplitude_.at(j); }

  double theta(int j, double y) const;
  double dtheta(int j, double y) const;

 private:
  double height_;
  std::vector<double> transverse_;
  std::vector<double> amplitude_;
};

/// beta_j = sqrt(k^2 - k_j^2) on the branch Im(beta_j) >= 0.
class LongitudinalSpectrum {
 public:
  LongitudinalSpectrum(double k, const ModalBasis& basis, double cutoff_rel_tol);

  double k() const { return k_; }
  int count() const { return static_cast<int>(beta_.size()); }
  cplx beta(int j) const { return beta_.at(j); }
  /// Index of the last propagating mode (N_pr).
  int last_propagating() const { return last_propagating_; }
  int propagating_count() const { return last_propagating_ + 1; }

  /// Modal factor of the NtD map, -i / beta_j.
  cplx ntd_factor(int j) const { return -I / beta_.at(j); }
  /// Modal factor of the adjoint map, i / conj(beta_j).
  cplx ntd_adjoint_factor(int j) const { return I / std::conj(beta_.at(j)); }

 private:
  double k_;
  std::vector<cplx> beta_;
  int last_propagating_ = -1;
};

struct Modal {
  ModalBasis basis;
  LongitudinalSpectrum spectrum;
};

inline constexpr double kDefaultCutoffTolerance = 1e-10;

/// Throws CutoffWavenumber when |k - k_j| < cutoff_rel_tol * k for a retained j.
Modal build_modal(double height, double k, int count,
                  double cutoff_rel_tol = kDefaultCutoffTolerance);

/// Applies N (or N* when adjoint) to a vector of modal coefficients.
std::vector<cplx> ntd_coeffs(std::span<const cplx> f, const LongitudinalSpectrum& spectrum,
                             bool adjoint = false);

enum class Wall { Left, Right };

inline double wall_abscissa(Wall w, double R) { return w == Wall::Left ? -R : R; }
/// x-component of the outward normal of Omega_R on the wall.
inline double wall_normal_sign(Wall w) { return w == Wall::Left ? -1.0 : 1.0; }

/// Modal coefficients on one truncation wall: value[j] = int u theta_j and
/// normal[j] = int (du/dn) theta_j with n the outward normal of Omega_R.
struct WallModalData {
  std::vector<cplx> value;
  std::vector<cplx> normal;
};

enum class Direction { Rightward, Leftward };
enum class TraceQuantity { Value, NormalDerivative };

struct ModeTrace {
  int mode = 0;
  /// Coefficient of theta_mode in the requested trace on the wall.
  cplx coefficient;
  /// Single-entry coefficient vector of length spectrum.count().
  std::vector<cplx> coefficients;
};

/// Trace of g_j^{+/-} = exp(+/- i beta_j x_1) theta_j on the wall x_1 = +/-R.
ModeTrace mode_trace(int j, Direction dir, const LongitudinalSpectrum& spectrum, Wall wall,
                     double R, TraceQuantity quantity);

/// A Helmholtz solution in the empty guide used as incident field or as an
/// analytic reference. Evaluation is batched over points.
class Field {
 public:
  virtual ~Field() = default;
  virtual void evaluate(std::span<const Vec2> points, std::span<cplx> values) const = 0;
  virtual void gradient(std::span<const Vec2> points, std::span<CVec2> grads) const = 0;
  /// Modal data on the wall x_1 = +/-R for modes 0..count-1.
  virtual WallModalData wall_data(Wall wall, double R, int count) const = 0;

  cplx value(Vec2 p) const;
  CVec2 grad(Vec2 p) const;
};

class ZeroField final : public Field {
 public:
  void evaluate(std::span<const Vec2> points, std::span<cplx> values) const override;
  void gradient(std::span<const Vec2> points, std::span<CVec2> grads) const override;
  WallModalData wall_data(Wall wall, double R, int count) const override;
};

/// Guided mode g_j^{+/-}, optionally scaled.
class GuidedMode final : public Field {
 public:
  GuidedMode(std::shared_ptr<const Modal> modal, int j, Direction dir, cplx amplitude = 1.0);

  void evaluate(std::span<const Vec2> points, std::span<cplx> values) const override;
  void gradient(std::span<const Vec2> points, std::span<CVec2> grads) const override;
  WallModalData wall_data(Wall wall, double R, int count) const override;

 private:
  std::shared_ptr<const Modal> modal_;
  int mode_;
  double sign_;
  cplx amplitude_;
};

/// Truncated waveguide Green's function
///   G(x) = -sum_{j=0}^{Nf} exp(i beta_j |x_1 - y_1|) / (2 i beta_j) theta_j(x_2) theta_j(y_2).
class FundamentalSolution final : public Field {
 public:
  /// [x1_min, x1_max] is the range of abscissae the field will be used on;
  /// the source must lie strictly outside it.
  FundamentalSolution(std::shared_ptr<const Modal> modal, Vec2 source, int terms_index,
                      double x1_min, double x1_max);

  void evaluate(std::span<const Vec2> points, std::span<cplx> values) const override;
  void gradient(std::span<const Vec2> points, std::span<CVec2> grads) const override;
  WallModalData wall_data(Wall wall, double R, int count) const override;

  Vec2 source() const { return source_; }
  int last_index() const { return last_; }

 private:
  void check_abscissa(double x1) const;

  std::shared_ptr<const Modal> modal_;
  Vec2 source_;
  int last_;
  double x1_min_;
  double x1_max_;
  std::vector<cplx> weight_;  // -theta_j(y_2) / (2 i beta_j)
};

}  // namespace tdgwg
