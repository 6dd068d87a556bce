#pragma once

// Line-based key=value experiment configuration. Lists use key=[v1,v2,...];
// '#' starts a comment.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdgwg/common.hpp"
#include "tdgwg/mesh.hpp"

namespace tdgwg {

enum class ExperimentKind { Fundamental, NtdSweep, Scatterer, GammaSweep, Custom };
enum class MeshKind { Uniform, Scatterer, Layer };
enum class IncidentKind { Mode, Fundamental };
enum class ReferenceKind { Exact, Overkill };

const char* to_string(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Custom;
  std::string name;  // experiment column of the CSV; defaults to the kind
  double k = 8.0;
  double R = 1.0;
  double H = 1.0;

  MeshKind mesh = MeshKind::Uniform;
  std::vector<double> h;
  Box box{-0.15, 0.15, 0.45, 0.75};
  cplx n_inside{1.0, 0.0};
  double interior_factor = 1.0;
  double layer_x0 = 0.0;
  double layer_x1 = 0.0;
  int layer_levels = 0;

  std::vector<int> Np;
  std::vector<int> M;  // default: N_pr + 13
  std::vector<double> gamma{0.0};

  IncidentKind incident = IncidentKind::Mode;
  int mode = 0;
  bool leftward = false;
  Vec2 source{};
  int Nf = 20;
  ReferenceKind reference = ReferenceKind::Exact;
  /// Overkill reference: min(h) / divisor with N_p + overkill_extra_directions.
  /// A divisor of 0 means one more step of the sweep's own refinement ratio
  /// (h[n-2] / h[n-1]), or 2 for a single h.
  double overkill_h_divisor = 0.0;
  int overkill_extra_directions = 4;

  /// number of modes carried by the spectrum; 0 selects max(M, N_f) + 5
  int modes = 0;
  double cutoff_tol = 1e-10;
  int quad_extra = 0;
  /// when false the wall_seconds column is written as 0 (byte-reproducible CSV)
  bool timing = true;
  std::string out;

  int spectrum_size() const;
  double overkill_h() const;
};

/// Parses and validates; throws ConfigError with the offending line.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

/// Raw key/value view of a config file, used by parse_config.
std::map<std::string, std::string> parse_key_values(std::istream& is);

/// "9+4i", "-1e-3i", "2.5", "(9,4)"
cplx parse_complex(const std::string& text);

}  // namespace tdgwg
