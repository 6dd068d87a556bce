#pragma once

// Parameter sweeps: mesh -> assemble -> solve -> error, one CSV row per
// (h, N_p, M, gamma) tuple in config order.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tdgwg/config.hpp"
#include "tdgwg/mesh.hpp"
#include "tdgwg/modal.hpp"
#include "tdgwg/solve.hpp"

namespace tdgwg {

struct ResultRow {
  std::string experiment;
  double k = 0.0;
  double R = 0.0;
  double H = 0.0;
  double h = 0.0;
  int Np = 0;
  int M = 0;
  double gamma = 0.0;
  long dofs = 0;
  double rel_l2_error = 0.0;
  double residual = 0.0;
  double cond_indicator = 0.0;
  double wall_seconds = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

extern const char* const kCsvHeader;

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRow& row);

/// Builds the mesh of one sweep entry.
Mesh build_mesh(const ExperimentConfig& cfg, double h);

/// Incident field of the configuration (also the exact reference in the
/// empty guide).
std::shared_ptr<const Field> make_incident(const ExperimentConfig& cfg,
                                           std::shared_ptr<const Modal> modal);

/// Assembles and solves one tuple.
SolutionField solve_tuple(const ExperimentConfig& cfg, std::shared_ptr<const Mesh> mesh,
                          std::shared_ptr<const Modal> modal, const Field& incident, int Np,
                          int M, double gamma);

using RowSink = std::function<void(const ResultRow&)>;

/// Runs the sweep; each row is passed to `sink` (if set) as soon as it is
/// complete, in config order. Failed tuples get status = error kind.
std::vector<ResultRow> run(const ExperimentConfig& cfg, const RowSink& sink = {});

/// Least-squares slope of log(error) against log(h) over the ok rows with
/// the given N_p. Throws InsufficientData below three points.
double fit_rate(std::span<const ResultRow> rows, int Np);
double fit_rate(std::span<const double> h, std::span<const double> error);

}  // namespace tdgwg
