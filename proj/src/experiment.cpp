#include "tdgwg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "tdgwg/assembly.hpp"
#include "tdgwg/basis.hpp"

namespace tdgwg {

const char* const kCsvHeader =
    "experiment,k,R,H,h,Np,M,gamma,dofs,rel_l2_error,residual,cond_indicator,wall_seconds,status";

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const ResultRow& r) {
  os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                    r.experiment, r.k, r.R, r.H, r.h, r.Np, r.M, r.gamma, r.dofs, r.rel_l2_error,
                    r.residual, r.cond_indicator, r.wall_seconds, r.status);
}

Mesh build_mesh(const ExperimentConfig& cfg, double h) {
  switch (cfg.mesh) {
    case MeshKind::Uniform:
      return generate_uniform(cfg.R, cfg.H, h);
    case MeshKind::Scatterer:
      return generate_scatterer_mesh(cfg.R, cfg.H, h, cfg.box, cfg.n_inside, cfg.interior_factor);
    case MeshKind::Layer:
      return generate_layer_refined(cfg.R, cfg.H, h, cfg.layer_x0, cfg.layer_x1, cfg.layer_levels).mesh;
  }
  throw InvalidArgument("unknown mesh kind");
}

std::shared_ptr<const Field> make_incident(const ExperimentConfig& cfg,
                                           std::shared_ptr<const Modal> modal) {
  if (cfg.incident == IncidentKind::Mode) {
    return std::make_shared<GuidedMode>(std::move(modal), cfg.mode,
                                        cfg.leftward ? Direction::Leftward : Direction::Rightward);
  }
  return std::make_shared<FundamentalSolution>(std::move(modal), cfg.source, cfg.Nf, -cfg.R, cfg.R);
}

SolutionField solve_tuple(const ExperimentConfig& cfg, std::shared_ptr<const Mesh> mesh,
                          std::shared_ptr<const Modal> modal, const Field& incident, int Np,
                          int M, double gamma) {
  const PlaneWaveSpace space(*mesh, cfg.k, Np);
  const FluxParameters params = flux_parameters(*mesh, gamma);
  const TDGSystem sys = assemble(*mesh, space, *modal, params, M, incident);
  SolutionMeta meta{cfg.k, Np, M, gamma, mesh->h()};
  return solve(sys, std::move(mesh), space, meta);
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string status_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->kind();
  return "InternalError";
}

/// Overkill solutions, one per (N_p, M, gamma), on a single refined mesh.
class OverkillCache {
 public:
  OverkillCache(const ExperimentConfig& cfg, std::shared_ptr<const Modal> modal,
                const Field& incident)
      : cfg_(cfg), modal_(std::move(modal)), incident_(incident) {}

  const SolutionField& get(int Np, int M, double gamma) {
    const auto key = std::make_tuple(Np, M, gamma);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    if (!mesh_) {
      mesh_ = std::make_shared<const Mesh>(build_mesh(cfg_, cfg_.overkill_h()));
    }
    auto field = std::make_unique<SolutionField>(solve_tuple(
        cfg_, mesh_, modal_, incident_, Np + cfg_.overkill_extra_directions, M, gamma));
    return *cache_.emplace(key, std::move(field)).first->second;
  }

 private:
  const ExperimentConfig& cfg_;
  std::shared_ptr<const Modal> modal_;
  const Field& incident_;
  std::shared_ptr<const Mesh> mesh_;
  std::map<std::tuple<int, int, double>, std::unique_ptr<SolutionField>> cache_;
};

}  // namespace

std::vector<ResultRow> run(const ExperimentConfig& cfg, const RowSink& sink) {
  auto modal = std::make_shared<const Modal>(build_modal(cfg.H, cfg.k, cfg.spectrum_size(), cfg.cutoff_tol));
  const auto incident = make_incident(cfg, modal);
  OverkillCache overkill(cfg, modal, *incident);

  std::vector<ResultRow> rows;
  auto emit = [&](ResultRow row) {
    if (!cfg.timing) row.wall_seconds = 0.0;
    if (sink) sink(row);
    rows.push_back(std::move(row));
  };

  for (double h : cfg.h) {
    std::shared_ptr<const Mesh> mesh;
    std::string mesh_status;
    const auto t_mesh = Clock::now();
    try {
      mesh = std::make_shared<const Mesh>(build_mesh(cfg, h));
    } catch (const std::exception& e) {
      mesh_status = status_of(e);
    }
    const double mesh_seconds = std::chrono::duration<double>(Clock::now() - t_mesh).count();

    for (int Np : cfg.Np) {
      for (int M : cfg.M) {
        for (double gamma : cfg.gamma) {
          ResultRow row;
          row.experiment = cfg.name;
          row.k = cfg.k;
          row.R = cfg.R;
          row.H = cfg.H;
          row.h = h;
          row.Np = Np;
          row.M = M;
          row.gamma = gamma;
          row.rel_l2_error = kNaN;
          row.residual = kNaN;
          row.cond_indicator = kNaN;
          const auto t0 = Clock::now();
          if (!mesh) {
            row.status = mesh_status;
            row.wall_seconds = mesh_seconds;
            emit(std::move(row));
            continue;
          }
          row.dofs = static_cast<long>(mesh->num_triangles()) * Np;
          try {
            const SolutionField u = solve_tuple(cfg, mesh, modal, *incident, Np, M, gamma);
            row.residual = u.residual;
            row.cond_indicator = u.cond_indicator;
            if (cfg.reference == ReferenceKind::Exact) {
              row.rel_l2_error = relative_l2_error(u, reference_of(*incident), cfg.quad_extra);
            } else {
              const SolutionField& ref = overkill.get(Np, M, gamma);
              row.rel_l2_error = relative_l2_error(u, reference_of(ref), cfg.quad_extra);
            }
          } catch (const std::exception& e) {
            row.status = status_of(e);
          }
          row.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
          emit(std::move(row));
        }
      }
    }
  }
  return rows;
}

double fit_rate(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size()) throw DimensionMismatch("h and error lengths differ");
  if (h.size() < 3) throw InsufficientData(fmt::format("{} points; need at least 3", h.size()));
  const double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0)) throw InvalidArgument("h and error must be positive");
    sx += std::log(h[i]);
    sy += std::log(error[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(error[i]) - my);
  }
  if (sxx == 0.0) throw InsufficientData("all h values coincide");
  return sxy / sxx;
}

double fit_rate(std::span<const ResultRow> rows, int Np) {
  std::vector<double> h, e;
  for (const auto& r : rows) {
    if (r.Np == Np && r.ok()) {
      h.push_back(r.h);
      e.push_back(r.rel_l2_error);
    }
  }
  return fit_rate(h, e);
}

}  // namespace tdgwg
