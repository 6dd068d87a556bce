#include "tdgwg/assembly.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "tdgwg/kernels.hpp"
#include "tdgwg/quad.hpp"

namespace tdgwg {

double flux_weight(double gamma, double length_ratio) {
  return 0.5 * (1.0 + gamma * (length_ratio - 1.0));
}

FluxParameters flux_parameters(const Mesh& mesh, double gamma) {
  if (gamma < 0.0 || !std::isfinite(gamma)) {
    throw NegativeGamma(fmt::format("gamma = {} must be non-negative", gamma));
  }
  const double lmax = mesh.max_facet_length();
  std::vector<double> v(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    if (F.cls == FacetClass::TruncationLeft || F.cls == FacetClass::TruncationRight) {
      v[f] = 0.5;
    } else {
      v[f] = flux_weight(gamma, lmax / F.length);
    }
  }
  return FluxParameters(gamma, std::move(v));
}

WallMoments wall_moments(const Mesh& mesh, const PlaneWaveSpace& space, const ModalBasis& basis,
                         Wall wall, int num_modes) {
  const FacetClass cls = wall == Wall::Left ? FacetClass::TruncationLeft : FacetClass::TruncationRight;
  const double wall_x = wall_abscissa(wall, mesh.R());
  const Vec2 normal{wall_normal_sign(wall), 0.0};
  const int np = space.num_directions();

  // elements touching the wall, in increasing order
  std::map<int, std::vector<int>> facets_of;
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (mesh.facet(f).cls == cls) facets_of[mesh.facet(f).elem[0]].push_back(f);

  WallMoments m;
  m.modes = num_modes;
  m.dofs.reserve(facets_of.size() * np);
  m.value.assign(facets_of.size() * np * num_modes, cplx{});
  m.normal.assign(m.value.size(), cplx{});
  std::vector<cplx> tmp(num_modes);
  std::size_t row = 0;
  for (const auto& [K, fs] : facets_of) {
    for (int j = 0; j < np; ++j, ++row) {
      m.dofs.push_back(space.dof(K, j));
      const PlaneWave w = space.wave(K, j);
      const cplx alpha = w.normal_factor(normal);
      for (int f : fs) {
        const Facet& F = mesh.facet(f);
        modal_moments(w, mesh.vertex(F.v[0]), mesh.vertex(F.v[1]), wall_x, basis, tmp);
        for (int l = 0; l < num_modes; ++l) {
          m.value[row * num_modes + l] += tmp[l];
          m.normal[row * num_modes + l] += alpha * tmp[l];
        }
      }
    }
  }
  return m;
}

TDGSystem assemble(const Mesh& mesh, const PlaneWaveSpace& space, const Modal& modal,
                   const FluxParameters& params, int num_modes, const Field& incident) {
  if (mesh.num_triangles() == 0) throw EmptyMesh("mesh has no triangles");
  if (num_modes < 1) throw ModeCountTooSmall(fmt::format("M = {} < 1", num_modes));
  if (num_modes > modal.spectrum.count()) {
    throw InvalidArgument(fmt::format("M = {} exceeds the {} modes of the spectrum", num_modes,
                                      modal.spectrum.count()));
  }
  if (space.num_elements() != mesh.num_triangles()) {
    throw DimensionMismatch("plane-wave space built on a different mesh");
  }
  if (static_cast<int>(params.values().size()) != mesh.num_facets()) {
    throw DimensionMismatch("flux parameters built on a different mesh");
  }

  const double k = space.k();
  const int np = space.num_directions();
  const int n = space.num_dofs();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_facets()) * 4 * np * np);

  double d2 = 0.5;
  bool have_d2 = false;

  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& F = mesh.facet(f);
    const Vec2 a = mesh.vertex(F.v[0]);
    const Vec2 b = mesh.vertex(F.v[1]);
    const Vec2 nrm = F.normal;  // out of elem[0]
    switch (F.cls) {
      case FacetClass::Interior: {
        const double pa = params.a(f);
        const double pb = params.b(f);
        const std::array<int, 2> el = F.elem;
        const std::array<double, 2> sigma{1.0, -1.0};
        for (int s = 0; s < 2; ++s) {
          for (int t = 0; t < 2; ++t) {
            for (int c = 0; c < np; ++c) {
              const PlaneWave trial = space.wave(el[s], c);
              const cplx ac = trial.normal_factor(nrm);
              for (int r = 0; r < np; ++r) {
                const PlaneWave test = space.wave(el[t], r);
                const cplx ar = std::conj(test.normal_factor(nrm));
                const cplx base = facet_pair_integral(trial, test, a, b, nrm, TraceProduct::ValueValue);
                // (-{w} + i b/k [grad w]) [grad v]^* + (a i k [w] + {grad w}) . [v]^*
                const cplx factor = (-0.5 + I * (pb / k) * sigma[s] * ac) * ar +
                                    (pa * I * k * sigma[s] + 0.5 * ac);
                trip.emplace_back(space.dof(el[t], r), space.dof(el[s], c), sigma[t] * factor * base);
              }
            }
          }
        }
        break;
      }
      case FacetClass::Wall: {
        const int K = F.elem[0];
        const double d1 = params.d1(f);
        for (int c = 0; c < np; ++c) {
          const PlaneWave trial = space.wave(K, c);
          const cplx ac = trial.normal_factor(nrm);
          for (int r = 0; r < np; ++r) {
            const PlaneWave test = space.wave(K, r);
            const cplx ar = std::conj(test.normal_factor(nrm));
            const cplx base = facet_pair_integral(trial, test, a, b, nrm, TraceProduct::ValueValue);
            trip.emplace_back(space.dof(K, r), space.dof(K, c), -(1.0 - I * (d1 / k) * ac) * ar * base);
          }
        }
        break;
      }
      case FacetClass::TruncationLeft:
      case FacetClass::TruncationRight: {
        const int K = F.elem[0];
        const double d2f = params.d2(f);
        if (have_d2 && d2f != d2) throw InvalidArgument("d2 must be constant on the truncation walls");
        d2 = d2f;
        have_d2 = true;
        // local parts: int (dw/dn) v^* + d2 i k int w v^*
        for (int c = 0; c < np; ++c) {
          const PlaneWave trial = space.wave(K, c);
          const cplx ac = trial.normal_factor(nrm);
          for (int r = 0; r < np; ++r) {
            const PlaneWave test = space.wave(K, r);
            const cplx base = facet_pair_integral(trial, test, a, b, nrm, TraceProduct::ValueValue);
            trip.emplace_back(space.dof(K, r), space.dof(K, c), (ac + d2 * I * k) * base);
          }
        }
        break;
      }
    }
  }

  // volume loss term 2 i k^2 Im(n) int w v^*
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    const double loss = mesh.triangle(K).n.imag();
    if (loss <= 0.0) continue;
    const auto p = mesh.corners(K);
    for (int c = 0; c < np; ++c) {
      const PlaneWave trial = space.wave(K, c);
      for (int r = 0; r < np; ++r) {
        const PlaneWave test = space.wave(K, r);
        const cplx vol = triangle_pair_integral(trial, test, p[0], p[1], p[2]);
        trip.emplace_back(space.dof(K, r), space.dof(K, c), 2.0 * I * k * k * loss * vol);
      }
    }
  }

  TDGSystem sys;
  sys.num_directions = np;
  sys.num_modes = num_modes;
  sys.b = Eigen::VectorXcd::Zero(n);

  // NtD coupling: dense rank-3M blocks among the dofs of each wall.
  const int M = num_modes;
  std::vector<cplx> nu(M), P(M), Qf(M), Qw(M);
  for (int j = 0; j < M; ++j) {
    nu[j] = modal.spectrum.ntd_factor(j);
    P[j] = -nu[j] + I * k * d2 * std::norm(nu[j]);
    Qf[j] = -I * k * d2 * nu[j];
    Qw[j] = -I * k * d2 * std::conj(nu[j]);
  }
  for (Wall wall : {Wall::Left, Wall::Right}) {
    const WallMoments wm = wall_moments(mesh, space, modal.basis, wall, M);
    const int nw = static_cast<int>(wm.dofs.size());
    if (nw == 0) continue;
    const int depth = 3 * M;
    std::vector<cplx> X(static_cast<std::size_t>(nw) * depth), Y(X.size());
    for (int r = 0; r < nw; ++r) {
      const cplx* f = &wm.normal[static_cast<std::size_t>(r) * M];
      const cplx* w = &wm.value[static_cast<std::size_t>(r) * M];
      cplx* x = &X[static_cast<std::size_t>(r) * depth];
      cplx* y = &Y[static_cast<std::size_t>(r) * depth];
      for (int j = 0; j < M; ++j) {
        x[j] = f[j];
        x[M + j] = w[j];
        x[2 * M + j] = f[j];
        y[j] = P[j] * f[j];
        y[M + j] = Qf[j] * f[j];
        y[2 * M + j] = Qw[j] * w[j];
      }
    }
    std::vector<cplx> C(static_cast<std::size_t>(nw) * nw);
    kernels::conj_gemm(X, Y, nw, nw, depth, C);
    for (int r = 0; r < nw; ++r)
      for (int c = 0; c < nw; ++c)
        trip.emplace_back(wm.dofs[r], wm.dofs[c], C[static_cast<std::size_t>(r) * nw + c]);

    // L_h from the first M modal coefficients of the incident wall data
    const WallModalData inc = incident.wall_data(wall, mesh.R(), M);
    for (int r = 0; r < nw; ++r) {
      const cplx* f = &wm.normal[static_cast<std::size_t>(r) * M];
      const cplx* w = &wm.value[static_cast<std::size_t>(r) * M];
      cplx acc{};
      for (int j = 0; j < M; ++j) {
        const cplx U = inc.value[j];
        const cplx G = inc.normal[j];
        acc += (U - nu[j] * G) * std::conj(f[j]) +
               d2 * I * k * (nu[j] * G - U) * std::conj(nu[j] * f[j] - w[j]);
      }
      sys.b[wm.dofs[r]] += acc;
    }
  }

  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

void write_matrix(std::ostream& os, const TDGSystem& system) {
  const auto& A = system.A;
  os << fmt::format("{} {} {}\n", A.rows(), A.cols(), A.nonZeros());
  for (int c = 0; c < A.outerSize(); ++c) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(A, c); it; ++it) {
      os << fmt::format("{} {} {:.17g} {:.17g}\n", it.row(), it.col(), it.value().real(),
                        it.value().imag());
    }
  }
}

cplx quadratic_form(const TDGSystem& system, const Eigen::VectorXcd& z) {
  if (z.size() != system.A.cols()) {
    throw DimensionMismatch(fmt::format("vector of size {} for a system of size {}", z.size(),
                                        system.A.cols()));
  }
  const Eigen::VectorXcd Az = system.A * z;
  return z.dot(Az);
}

double mesh_norm(const TDGSystem& system, const Eigen::VectorXcd& z) {
  return std::sqrt(std::max(quadratic_form(system, z).imag(), 0.0));
}

}  // namespace tdgwg
