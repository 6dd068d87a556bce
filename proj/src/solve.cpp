#include "tdgwg/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SparseLU>
#ifdef TDGWG_HAVE_UMFPACK
#include <umfpack.h>
#endif
#include <fmt/format.h>

#include "tdgwg/kernels.hpp"
#include "tdgwg/quad.hpp"

namespace tdgwg {

namespace {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// max |d_i| / min |d_i|
double ratio(const std::vector<cplx>& d) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const cplx& v : d) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  return hi / lo;
}

#ifdef TDGWG_HAVE_UMFPACK
/// UMFPACK LU with threshold 1 (partial pivoting) and the unsymmetric strategy.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& A) : A_(A) {
    umfpack_zi_defaults(control_);
    control_[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_UNSYMMETRIC;
    control_[UMFPACK_PIVOT_TOLERANCE] = 1.0;
    control_[UMFPACK_SYM_PIVOT_TOLERANCE] = 1.0;
    const int n = static_cast<int>(A.rows());
    int status = umfpack_zi_symbolic(n, n, A.outerIndexPtr(), A.innerIndexPtr(), values(), nullptr,
                                     &symbolic_, control_, nullptr);
    if (status != UMFPACK_OK) throw SingularSystem(fmt::format("UMFPACK symbolic status {}", status));
    status = umfpack_zi_numeric(A.outerIndexPtr(), A.innerIndexPtr(), values(), nullptr, symbolic_,
                                &numeric_, control_, nullptr);
    if (status != UMFPACK_OK) throw SingularSystem(fmt::format("UMFPACK numeric status {}", status));
  }
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;
  ~Factorization() {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    if (symbolic_) umfpack_zi_free_symbolic(&symbolic_);
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const {
    Eigen::VectorXcd x(b.size());
    const int status = umfpack_zi_solve(UMFPACK_A, A_.outerIndexPtr(), A_.innerIndexPtr(), values(),
                                        nullptr, reinterpret_cast<double*>(x.data()), nullptr,
                                        reinterpret_cast<const double*>(b.data()), nullptr, numeric_,
                                        control_, nullptr);
    if (status != UMFPACK_OK) throw SingularSystem(fmt::format("UMFPACK solve status {}", status));
    return x;
  }

  double diagonal_ratio() const {
    std::vector<cplx> d(A_.rows());
    umfpack_zi_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                           nullptr, nullptr, reinterpret_cast<double*>(d.data()), nullptr, nullptr,
                           nullptr, numeric_);
    return ratio(d);
  }

 private:
  const double* values() const { return reinterpret_cast<const double*>(A_.valuePtr()); }

  const SparseMatrix& A_;
  double control_[UMFPACK_CONTROL];
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
};
#else
class Factorization : Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  explicit Factorization(const SparseMatrix& A) {
    analyzePattern(A);
    factorize(A);
    if (info() != Eigen::Success) {
      throw SingularSystem("sparse LU factorization failed: " + lastErrorMessage());
    }
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const {
    return SparseLU::solve(b);
  }

  /// The diagonal of U lives in the supernodal L store.
  double diagonal_ratio() const {
    std::vector<cplx> d(cols());
    for (Eigen::Index j = 0; j < cols(); ++j) {
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          d[j] = it.value();
          break;
        }
      }
    }
    return ratio(d);
  }
};
#endif

double relative_residual(const SparseMatrix& A, const Eigen::VectorXcd& b,
                         const Eigen::VectorXcd& z, double normA) {
  const double den = normA * z.norm() + b.norm();
  if (den == 0.0) return 0.0;
  return (A * z - b).norm() / den;
}

int quadrature_order(cplx kappa, double hK, int extra) {
  return std::min(kMaxGaussNodes, static_cast<int>(std::ceil(std::abs(kappa) * hK)) + 8 + extra);
}

}  // namespace

LinearSolution solve_system(const TDGSystem& system) {
  const SparseMatrix& A = system.A;
  if (A.rows() != A.cols() || A.rows() != system.b.size()) {
    throw DimensionMismatch(fmt::format("matrix {}x{} with right-hand side of size {}", A.rows(),
                                        A.cols(), system.b.size()));
  }
  if (A.rows() == 0) throw EmptyMesh("empty system");

  const Factorization lu(A);
  LinearSolution out;
  out.cond_indicator = lu.diagonal_ratio();
  if (!std::isfinite(out.cond_indicator)) throw SingularSystem("zero pivot in the LU factors");

  out.z = lu.solve(system.b);
  if (!out.z.allFinite()) throw SingularSystem("non-finite solution");
  const double normA = A.norm();
  out.residual = relative_residual(A, system.b, out.z, normA);
  for (int step = 0; step < 2 && out.residual > 1e-15; ++step) {
    const Eigen::VectorXcd r = system.b - A * out.z;
    const Eigen::VectorXcd z1 = out.z + lu.solve(r);
    const double res1 = relative_residual(A, system.b, z1, normA);
    if (!(res1 < out.residual)) break;
    out.z = z1;
    out.residual = res1;
  }
  return out;
}

SolutionField::SolutionField(std::shared_ptr<const Mesh> mesh, const PlaneWaveSpace& space,
                             Eigen::VectorXcd coeffs, SolutionMeta meta)
    : mesh_(std::move(mesh)),
      space_(space),
      z_(std::move(coeffs)),
      meta_(meta),
      locator_(*mesh_) {
  if (z_.size() != space_.num_dofs()) {
    throw DimensionMismatch(
        fmt::format("{} coefficients for {} degrees of freedom", z_.size(), space_.num_dofs()));
  }
  if (space_.num_elements() != mesh_->num_triangles()) {
    throw DimensionMismatch("plane-wave space built on a different mesh");
  }
  const int np = space_.num_directions();
  ex_.resize(static_cast<std::size_t>(space_.num_elements()) * np);
  ey_.resize(ex_.size());
  for (int K = 0; K < space_.num_elements(); ++K) {
    for (int j = 0; j < np; ++j) {
      const CVec2 c = space_.wave(K, j).exponent();
      ex_[space_.dof(K, j)] = c.x;
      ey_[space_.dof(K, j)] = c.y;
    }
  }
}

void SolutionField::evaluate_on(int K, std::span<const Vec2> points, std::span<cplx> values,
                                std::span<CVec2> grads) const {
  const int np = space_.num_directions();
  const std::size_t off = static_cast<std::size_t>(K) * np;
  const Vec2 x0 = space_.centroid(K);
  std::vector<double> rx(points.size()), ry(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    rx[p] = points[p].x - x0.x;
    ry[p] = points[p].y - x0.y;
  }
  kernels::PlaneWaveExpansion w{std::span<const cplx>(ex_).subspan(off, np),
                                std::span<const cplx>(ey_).subspan(off, np),
                                std::span<const cplx>(z_.data() + off, np)};
  if (grads.empty()) {
    kernels::plane_wave_sum(w, rx, ry, values);
    return;
  }
  std::vector<cplx> gx(points.size()), gy(points.size());
  kernels::plane_wave_sum(w, rx, ry, values, gx, gy);
  for (std::size_t p = 0; p < points.size(); ++p) grads[p] = {gx[p], gy[p]};
}

void SolutionField::evaluate(std::span<const Vec2> points, std::span<cplx> values,
                             std::span<CVec2> grads) const {
  // group the points by element so each expansion is summed once per batch
  std::vector<std::pair<int, std::size_t>> owner(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const int K = locator_.locate(points[p]);
    if (K < 0) {
      throw PointOutsideMesh(fmt::format("({}, {}) is not in the mesh", points[p].x, points[p].y));
    }
    owner[p] = {K, p};
  }
  std::sort(owner.begin(), owner.end());
  std::vector<Vec2> pts;
  std::vector<cplx> vals;
  std::vector<CVec2> grs;
  for (std::size_t s = 0; s < owner.size();) {
    std::size_t e = s;
    while (e < owner.size() && owner[e].first == owner[s].first) ++e;
    pts.clear();
    for (std::size_t i = s; i < e; ++i) pts.push_back(points[owner[i].second]);
    vals.resize(pts.size());
    grs.resize(grads.empty() ? 0 : pts.size());
    evaluate_on(owner[s].first, pts, vals, grs);
    for (std::size_t i = s; i < e; ++i) {
      values[owner[i].second] = vals[i - s];
      if (!grads.empty()) grads[owner[i].second] = grs[i - s];
    }
    s = e;
  }
}

cplx SolutionField::value(Vec2 p) const {
  cplx v;
  evaluate({&p, 1}, {&v, 1});
  return v;
}

CVec2 SolutionField::grad(Vec2 p) const {
  cplx v;
  CVec2 g;
  evaluate({&p, 1}, {&v, 1}, {&g, 1});
  return g;
}

SolutionField solve(const TDGSystem& system, std::shared_ptr<const Mesh> mesh,
                    const PlaneWaveSpace& space, SolutionMeta meta) {
  LinearSolution sol = solve_system(system);
  SolutionField field(std::move(mesh), space, std::move(sol.z), meta);
  field.residual = sol.residual;
  field.cond_indicator = sol.cond_indicator;
  return field;
}

ReferenceFn reference_of(const Field& field) {
  return [&field](std::span<const Vec2> p, std::span<cplx> v) { field.evaluate(p, v); };
}

ReferenceFn reference_of(const SolutionField& field) {
  return [&field](std::span<const Vec2> p, std::span<cplx> v) { field.evaluate(p, v); };
}

double relative_l2_error(const SolutionField& field, const ReferenceFn& reference,
                         int extra_order) {
  const Mesh& mesh = field.mesh();
  double num = 0.0;
  double den = 0.0;
  std::vector<cplx> uh, u;
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    const auto c = mesh.corners(K);
    const int q = quadrature_order(field.space().wavenumber(K), mesh.diameter(K), extra_order);
    const TriangleRule rule = triangle_rule(c[0], c[1], c[2], q);
    uh.resize(rule.nodes.size());
    u.resize(rule.nodes.size());
    field.evaluate_on(K, rule.nodes, uh);
    reference(rule.nodes, u);
    for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
      num += rule.weights[p] * std::norm(u[p] - uh[p]);
      den += rule.weights[p] * std::norm(u[p]);
    }
  }
  if (!(std::sqrt(den) >= 1e-300)) throw ZeroReference("reference has zero L2 norm");
  return std::sqrt(num / den);
}

double best_approximation_error(const Mesh& mesh, const PlaneWaveSpace& space,
                                const ReferenceFn& reference, int extra_order) {
  const int np = space.num_directions();
  double num = 0.0;
  double den = 0.0;
  std::vector<cplx> u;
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    const auto c = mesh.corners(K);
    const int q = quadrature_order(space.wavenumber(K), mesh.diameter(K), extra_order);
    const TriangleRule rule = triangle_rule(c[0], c[1], c[2], q);
    const int m = static_cast<int>(rule.nodes.size());
    u.resize(m);
    reference(rule.nodes, u);
    Eigen::MatrixXcd B(m, np);
    Eigen::VectorXcd rhs(m);
    for (int p = 0; p < m; ++p) {
      const double sw = std::sqrt(rule.weights[p]);
      for (int j = 0; j < np; ++j) B(p, j) = sw * space.wave(K, j).value(rule.nodes[p]);
      rhs[p] = sw * u[p];
      den += rule.weights[p] * std::norm(u[p]);
    }
    const Eigen::VectorXcd x = B.completeOrthogonalDecomposition().solve(rhs);
    num += (B * x - rhs).squaredNorm();
  }
  if (!(std::sqrt(den) >= 1e-300)) throw ZeroReference("reference has zero L2 norm");
  return std::sqrt(num / den);
}

void write_field_grid(std::ostream& os, const SolutionField& field, int nx, int ny) {
  if (nx < 2 || ny < 2) throw InvalidArgument(fmt::format("grid {}x{} needs at least 2x2", nx, ny));
  const double R = field.mesh().R();
  const double H = field.mesh().H();
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      pts.push_back({-R + 2.0 * R * i / (nx - 1), H * j / (ny - 1)});
  std::vector<cplx> v(pts.size());
  field.evaluate(pts, v);
  os << "x y re(u) im(u)\n";
  for (std::size_t p = 0; p < pts.size(); ++p) {
    os << fmt::format("{:.17g} {:.17g} {:.17g} {:.17g}\n", pts[p].x, pts[p].y, v[p].real(),
                      v[p].imag());
  }
}

}  // namespace tdgwg
