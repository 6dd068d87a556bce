// tdgwg: run waveguide TDG experiments from a config file.
//
//   tdgwg run   <config> --out <dir>              results.csv
//   tdgwg mesh  <config> --out <dir>              mesh_<i>.txt per h entry
//   tdgwg field <config> --grid NX NY --out <dir> field.txt for the first tuple
//                                                 (--dump-matrix adds matrix.txt)
//
// Exit status: 0 all rows ok, 2 some rows failed, 3 config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tdgwg/assembly.hpp"
#include "tdgwg/experiment.hpp"
#include "tdgwg/kernels.hpp"

namespace fs = std::filesystem;
using namespace tdgwg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedRows = 2;
constexpr int kExitConfig = 3;

fs::path output_dir(const std::string& cli_out, const ExperimentConfig& cfg) {
  const std::string out = cli_out.empty() ? cfg.out : cli_out;
  if (out.empty()) throw ConfigError("no output directory (use --out or out=...)");
  fs::create_directories(out);
  return out;
}

int cmd_run(const std::string& config, const std::string& out) {
  const ExperimentConfig cfg = load_config(config);
  const fs::path dir = output_dir(out, cfg);
  std::ofstream csv(dir / "results.csv", std::ios::binary);
  if (!csv) throw ConfigError(fmt::format("cannot write to '{}'", dir.string()));
  write_csv_header(csv);
  std::cerr << fmt::format("{}: k={} R={} H={} kernels={}\n", cfg.name, cfg.k, cfg.R, cfg.H,
                           kernels::isa_name(kernels::active_isa()));
  bool all_ok = true;
  run(cfg, [&](const ResultRow& r) {
    write_csv_row(csv, r);
    csv.flush();
    all_ok = all_ok && r.ok();
    std::cerr << fmt::format("  h={:<8.4g} Np={:<3} M={:<3} gamma={:<5.3g} dofs={:<7} err={:.3e} {} ({:.2f}s)\n",
                             r.h, r.Np, r.M, r.gamma, r.dofs, r.rel_l2_error, r.status,
                             r.wall_seconds);
  });
  return all_ok ? kExitOk : kExitFailedRows;
}

int cmd_mesh(const std::string& config, const std::string& out) {
  const ExperimentConfig cfg = load_config(config);
  const fs::path dir = output_dir(out, cfg);
  bool all_ok = true;
  for (std::size_t i = 0; i < cfg.h.size(); ++i) {
    try {
      const Mesh mesh = build_mesh(cfg, cfg.h[i]);
      std::ofstream os(dir / fmt::format("mesh_{}.txt", i), std::ios::binary);
      write_mesh(os, mesh);
      std::cerr << fmt::format("h={}: {} triangles, {} facets, max/min edge {:.4g}\n", cfg.h[i],
                               mesh.num_triangles(), mesh.num_facets(),
                               mesh.max_facet_length() / mesh.min_facet_length());
    } catch (const Error& e) {
      std::cerr << fmt::format("h={}: {}\n", cfg.h[i], e.what());
      all_ok = false;
    }
  }
  return all_ok ? kExitOk : kExitFailedRows;
}

int cmd_field(const std::string& config, const std::string& out, int nx, int ny, bool dump_matrix) {
  const ExperimentConfig cfg = load_config(config);
  const fs::path dir = output_dir(out, cfg);
  try {
    auto modal = std::make_shared<const Modal>(build_modal(cfg.H, cfg.k, cfg.spectrum_size(), cfg.cutoff_tol));
    const auto incident = make_incident(cfg, modal);
    auto mesh = std::make_shared<const Mesh>(build_mesh(cfg, cfg.h.front()));
    const PlaneWaveSpace space(*mesh, cfg.k, cfg.Np.front());
    const TDGSystem sys = assemble(*mesh, space, *modal, flux_parameters(*mesh, cfg.gamma.front()),
                                   cfg.M.front(), *incident);
    if (dump_matrix) {
      std::ofstream ms(dir / "matrix.txt", std::ios::binary);
      write_matrix(ms, sys);
    }
    const SolutionField u = solve(sys, mesh, space,
                                  {cfg.k, cfg.Np.front(), cfg.M.front(), cfg.gamma.front(), mesh->h()});
    std::ofstream os(dir / "field.txt", std::ios::binary);
    write_field_grid(os, u, nx, ny);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitFailedRows;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trefftz DG solver for 2D waveguide scattering"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::vector<int> grid;

  auto* run_cmd = app.add_subcommand("run", "run the sweep and write results.csv");
  run_cmd->add_option("config", config, "config file")->required();
  run_cmd->add_option("--out", out, "output directory");

  auto* mesh_cmd = app.add_subcommand("mesh", "write the meshes in text format");
  mesh_cmd->add_option("config", config, "config file")->required();
  mesh_cmd->add_option("--out", out, "output directory");

  auto* field_cmd = app.add_subcommand("field", "sample the first solution on a grid");
  field_cmd->add_option("config", config, "config file")->required();
  field_cmd->add_option("--grid", grid, "NX NY")->expected(2)->required();
  field_cmd->add_option("--out", out, "output directory");
  bool dump_matrix = false;
  field_cmd->add_flag("--dump-matrix", dump_matrix, "also write matrix.txt (rows cols nnz / row col re im)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config, out);
    if (mesh_cmd->parsed()) return cmd_mesh(config, out);
    if (field_cmd->parsed()) return cmd_field(config, out, grid[0], grid[1], dump_matrix);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitFailedRows;
  }
  return kExitOk;
}
