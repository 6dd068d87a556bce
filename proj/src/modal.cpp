#include "tdgwg/modal.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace tdgwg {

ModalBasis::ModalBasis(double height, int count) : height_(height) {
  if (!(height > 0.0)) throw InvalidArgument("cross-section height must be positive");
  if (count < 1) throw InvalidArgument("at least one mode is required");
  transverse_.resize(count);
  amplitude_.resize(count);
  for (int j = 0; j < count; ++j) {
    transverse_[j] = j * pi / height;
    amplitude_[j] = j == 0 ? std::sqrt(1.0 / height) : std::sqrt(2.0 / height);
  }
}

double ModalBasis::theta(int j, double y) const {
  return amplitude_[j] * std::cos(transverse_[j] * y);
}

double ModalBasis::dtheta(int j, double y) const {
  return -amplitude_[j] * transverse_[j] * std::sin(transverse_[j] * y);
}

LongitudinalSpectrum::LongitudinalSpectrum(double k, const ModalBasis& basis,
                                           double cutoff_rel_tol)
    : k_(k) {
  if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
  beta_.resize(basis.count());
  for (int j = 0; j < basis.count(); ++j) {
    const double kj = basis.transverse(j);
    if (std::abs(k - kj) < cutoff_rel_tol * k) {
      throw CutoffWavenumber(fmt::format("k = {} is within tolerance of k_{} = {}", k, j, kj));
    }
    // (k - kj)(k + kj) avoids cancellation near the cutoff.
    const double d = (k - kj) * (k + kj);
    if (d > 0.0) {
      beta_[j] = std::sqrt(d);
      last_propagating_ = j;
    } else {
      beta_[j] = cplx(0.0, std::sqrt(-d));
    }
  }
}

Modal build_modal(double height, double k, int count, double cutoff_rel_tol) {
  ModalBasis basis(height, count);
  LongitudinalSpectrum spectrum(k, basis, cutoff_rel_tol);
  return Modal{std::move(basis), std::move(spectrum)};
}

std::vector<cplx> ntd_coeffs(std::span<const cplx> f, const LongitudinalSpectrum& spectrum,
                             bool adjoint) {
  if (static_cast<int>(f.size()) > spectrum.count()) {
    throw DimensionMismatch("more coefficients than modes in the spectrum");
  }
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const int jj = static_cast<int>(j);
    out[j] = (adjoint ? spectrum.ntd_adjoint_factor(jj) : spectrum.ntd_factor(jj)) * f[j];
  }
  return out;
}

ModeTrace mode_trace(int j, Direction dir, const LongitudinalSpectrum& spectrum, Wall wall,
                     double R, TraceQuantity quantity) {
  if (j < 0 || j >= spectrum.count()) throw InvalidArgument("mode index out of range");
  const double s = dir == Direction::Rightward ? 1.0 : -1.0;
  const cplx beta = spectrum.beta(j);
  const double x1 = wall_abscissa(wall, R);
  cplx c = std::exp(s * I * beta * x1);
  if (quantity == TraceQuantity::NormalDerivative) c *= wall_normal_sign(wall) * s * I * beta;
  ModeTrace t;
  t.mode = j;
  t.coefficient = c;
  t.coefficients.assign(spectrum.count(), cplx{});
  t.coefficients[j] = c;
  return t;
}

cplx Field::value(Vec2 p) const {
  cplx v;
  evaluate(std::span<const Vec2>(&p, 1), std::span<cplx>(&v, 1));
  return v;
}

CVec2 Field::grad(Vec2 p) const {
  CVec2 g;
  gradient(std::span<const Vec2>(&p, 1), std::span<CVec2>(&g, 1));
  return g;
}

void ZeroField::evaluate(std::span<const Vec2>, std::span<cplx> values) const {
  std::fill(values.begin(), values.end(), cplx{});
}

void ZeroField::gradient(std::span<const Vec2>, std::span<CVec2> grads) const {
  std::fill(grads.begin(), grads.end(), CVec2{});
}

WallModalData ZeroField::wall_data(Wall, double, int count) const {
  return {std::vector<cplx>(count), std::vector<cplx>(count)};
}

GuidedMode::GuidedMode(std::shared_ptr<const Modal> modal, int j, Direction dir, cplx amplitude)
    : modal_(std::move(modal)),
      mode_(j),
      sign_(dir == Direction::Rightward ? 1.0 : -1.0),
      amplitude_(amplitude) {
  if (j < 0 || j >= modal_->spectrum.count()) throw InvalidArgument("mode index out of range");
}

void GuidedMode::evaluate(std::span<const Vec2> points, std::span<cplx> values) const {
  const cplx beta = modal_->spectrum.beta(mode_);
  for (std::size_t p = 0; p < points.size(); ++p) {
    values[p] = amplitude_ * std::exp(sign_ * I * beta * points[p].x) *
                modal_->basis.theta(mode_, points[p].y);
  }
}

void GuidedMode::gradient(std::span<const Vec2> points, std::span<CVec2> grads) const {
  const cplx beta = modal_->spectrum.beta(mode_);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const cplx e = amplitude_ * std::exp(sign_ * I * beta * points[p].x);
    grads[p] = {sign_ * I * beta * e * modal_->basis.theta(mode_, points[p].y),
                e * modal_->basis.dtheta(mode_, points[p].y)};
  }
}

WallModalData GuidedMode::wall_data(Wall wall, double R, int count) const {
  WallModalData d{std::vector<cplx>(count), std::vector<cplx>(count)};
  if (mode_ < count) {
    const Direction dir = sign_ > 0 ? Direction::Rightward : Direction::Leftward;
    d.value[mode_] =
        amplitude_ * mode_trace(mode_, dir, modal_->spectrum, wall, R, TraceQuantity::Value)
                         .coefficient;
    d.normal[mode_] = amplitude_ * mode_trace(mode_, dir, modal_->spectrum, wall, R,
                                              TraceQuantity::NormalDerivative)
                                       .coefficient;
  }
  return d;
}

FundamentalSolution::FundamentalSolution(std::shared_ptr<const Modal> modal, Vec2 source,
                                         int terms_index, double x1_min, double x1_max)
    : modal_(std::move(modal)), source_(source), last_(terms_index), x1_min_(x1_min),
      x1_max_(x1_max) {
  if (terms_index < 0 || terms_index >= modal_->spectrum.count()) {
    throw InvalidArgument(fmt::format("N_f = {} exceeds the available {} modes", terms_index,
                                      modal_->spectrum.count()));
  }
  if (source.x >= x1_min && source.x <= x1_max) {
    throw SourceInsideDomain(fmt::format("source abscissa {} lies in [{}, {}]", source.x,
                                         x1_min, x1_max));
  }
  weight_.resize(last_ + 1);
  for (int j = 0; j <= last_; ++j) {
    weight_[j] = -modal_->basis.theta(j, source.y) / (2.0 * I * modal_->spectrum.beta(j));
  }
}

void FundamentalSolution::check_abscissa(double x1) const {
  if (x1 < x1_min_ || x1 > x1_max_) {
    throw SourceInsideDomain(fmt::format("evaluation abscissa {} outside [{}, {}]", x1, x1_min_,
                                         x1_max_));
  }
}

void FundamentalSolution::evaluate(std::span<const Vec2> points, std::span<cplx> values) const {
  for (std::size_t p = 0; p < points.size(); ++p) {
    check_abscissa(points[p].x);
    const double dist = std::abs(points[p].x - source_.x);
    cplx sum{};
    for (int j = 0; j <= last_; ++j) {
      sum += weight_[j] * std::exp(I * modal_->spectrum.beta(j) * dist) *
             modal_->basis.theta(j, points[p].y);
    }
    values[p] = sum;
  }
}

void FundamentalSolution::gradient(std::span<const Vec2> points, std::span<CVec2> grads) const {
  for (std::size_t p = 0; p < points.size(); ++p) {
    check_abscissa(points[p].x);
    const double dx = points[p].x - source_.x;
    const double sgn = dx > 0 ? 1.0 : -1.0;
    CVec2 g;
    for (int j = 0; j <= last_; ++j) {
      const cplx beta = modal_->spectrum.beta(j);
      const cplx e = weight_[j] * std::exp(I * beta * std::abs(dx));
      g.x += sgn * I * beta * e * modal_->basis.theta(j, points[p].y);
      g.y += e * modal_->basis.dtheta(j, points[p].y);
    }
    grads[p] = g;
  }
}

WallModalData FundamentalSolution::wall_data(Wall wall, double R, int count) const {
  WallModalData d{std::vector<cplx>(count), std::vector<cplx>(count)};
  const double x1 = wall_abscissa(wall, R);
  const double dx = x1 - source_.x;
  const double sgn = dx > 0 ? 1.0 : -1.0;
  for (int j = 0; j <= last_ && j < count; ++j) {
    const cplx beta = modal_->spectrum.beta(j);
    d.value[j] = weight_[j] * std::exp(I * beta * std::abs(dx));
    d.normal[j] = wall_normal_sign(wall) * sgn * I * beta * d.value[j];
  }
  return d;
}

}  // namespace tdgwg
