#include "tdgwg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "tdgwg/modal.hpp"

namespace tdgwg {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_double(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t.size() > 1 && t.front() == '+' && t[1] != '-' && t[1] != '+') t.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, t));
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, t));
  }
  return v;
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ConfigError(fmt::format("{}: empty value", key));
  if (t.front() == '[') {
    if (t.back() != ']') throw ConfigError(fmt::format("{}: unterminated list '{}'", key, t));
    t = t.substr(1, t.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(fmt::format("{}: empty list entry", key));
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split_list(key, text)) v.push_back(to_double(key, s));
  return v;
}

/// Integer lists also accept ranges a..b and a..b:step.
std::vector<int> to_ints(const std::string& key, const std::string& text) {
  std::vector<int> v;
  for (const auto& s : split_list(key, text)) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
      v.push_back(to_int(key, s));
      continue;
    }
    const auto colon = s.find(':', dots);
    const int a = to_int(key, s.substr(0, dots));
    const int b = to_int(key, s.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                                             : colon - dots - 2));
    const int step = colon == std::string::npos ? 1 : to_int(key, s.substr(colon + 1));
    if (step <= 0 || b < a) throw ConfigError(fmt::format("{}: bad range '{}'", key, s));
    for (int i = a; i <= b; i += step) v.push_back(i);
  }
  return v;
}

template <class T>
void require_positive(const char* key, T v) {
  if (!(v > 0) || !std::isfinite(static_cast<double>(v))) {
    throw ConfigError(fmt::format("{} must be positive (got {})", key, v));
  }
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "fundamental") return ExperimentKind::Fundamental;
  if (s == "ntd-sweep") return ExperimentKind::NtdSweep;
  if (s == "scatterer") return ExperimentKind::Scatterer;
  if (s == "gamma-sweep") return ExperimentKind::GammaSweep;
  if (s == "custom") return ExperimentKind::Custom;
  throw ConfigError(fmt::format("unknown experiment '{}'", s));
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "name",       "k",          "R",           "H",
      "mesh",       "h",          "box",        "n_inside",    "interior_factor",
      "layer",      "layer_levels", "Np",       "M",           "gamma",
      "incident",   "mode",       "direction",  "source",      "Nf",
      "reference",  "overkill_h_divisor", "overkill_extra_directions",
      "modes",      "cutoff_tol", "quad_extra", "timing",      "out"};
  return keys;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Fundamental: return "fundamental";
    case ExperimentKind::NtdSweep: return "ntd-sweep";
    case ExperimentKind::Scatterer: return "scatterer";
    case ExperimentKind::GammaSweep: return "gamma-sweep";
    case ExperimentKind::Custom: return "custom";
  }
  return "?";
}

int ExperimentConfig::spectrum_size() const {
  if (modes > 0) return modes;
  const int mmax = M.empty() ? 1 : *std::max_element(M.begin(), M.end());
  return std::max(mmax, Nf) + 5;
}

double ExperimentConfig::overkill_h() const {
  const double hmin = *std::min_element(h.begin(), h.end());
  double div = overkill_h_divisor;
  if (div == 0.0) {
    div = 2.0;
    if (h.size() >= 2 && h[h.size() - 2] > h.back()) div = h[h.size() - 2] / h.back();
  }
  return hmin / div;
}

cplx parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw ConfigError("empty complex number");
  if (t.front() == '(' && t.back() == ')') {
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw ConfigError(fmt::format("bad complex '{}'", text));
    return {to_double("complex", t.substr(1, comma - 1)),
            to_double("complex", t.substr(comma + 1, t.size() - comma - 2))};
  }
  if (t.back() != 'i' && t.back() != 'j') return {to_double("complex", t), 0.0};
  t.pop_back();
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t p = t.size(); p-- > 1;) {
    if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_part = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return to_double("complex", s);
  };
  if (split == std::string::npos) return {0.0, imag_part(t)};
  return {to_double("complex", t.substr(0, split)), imag_part(t.substr(split))};
}

std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected key=value, got '{}'", lineno, line));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
    if (!known_keys().count(key)) throw ConfigError(fmt::format("line {}: unknown key '{}'", lineno, key));
    if (kv.count(key)) throw ConfigError(fmt::format("line {}: duplicate key '{}'", lineno, key));
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig parse_config(std::istream& is) {
  const auto kv = parse_key_values(is);
  auto has = [&](const char* key) { return kv.count(key) > 0; };
  auto get = [&](const char* key) { return kv.at(key); };

  ExperimentConfig c;
  if (!has("experiment")) throw ConfigError("missing key 'experiment'");
  c.kind = parse_kind(get("experiment"));
  c.name = has("name") ? get("name") : to_string(c.kind);
  if (c.name.find_first_of(",\n\r\"") != std::string::npos) {
    throw ConfigError("name must not contain commas, quotes or newlines");
  }

  // per-kind defaults
  switch (c.kind) {
    case ExperimentKind::Fundamental:
      c.incident = IncidentKind::Fundamental;
      c.Np = {3, 5, 7, 9, 11, 13, 15};
      break;
    case ExperimentKind::NtdSweep:
      c.incident = IncidentKind::Fundamental;
      c.R = 1.0;
      c.h = {0.1};
      c.Np = {13};
      c.M.clear();
      for (int m = 1; m <= 20; ++m) c.M.push_back(m);
      break;
    case ExperimentKind::Scatterer:
      c.mesh = MeshKind::Scatterer;
      c.n_inside = {9.0, 4.0};
      c.interior_factor = 1.0 / 3.0;
      c.reference = ReferenceKind::Overkill;
      c.Np = {9};
      break;
    case ExperimentKind::GammaSweep:
      c.mesh = MeshKind::Layer;
      c.R = 1.0;
      c.h = {0.23};
      c.Np = {7};
      c.gamma = {0.0, 0.25, 0.5, 0.75, 1.0};
      c.layer_x0 = -0.05;
      c.layer_x1 = 0.05;
      c.layer_levels = 4;
      break;
    case ExperimentKind::Custom:
      break;
  }

  if (has("k")) c.k = to_double("k", get("k"));
  require_positive("k", c.k);
  if (has("H")) c.H = to_double("H", get("H"));
  require_positive("H", c.H);
  // one wavelength by default where the experiments fix R = 2 pi / k
  if (c.kind == ExperimentKind::Fundamental || c.kind == ExperimentKind::Scatterer) c.R = 2.0 * pi / c.k;
  if (has("R")) c.R = to_double("R", get("R"));
  require_positive("R", c.R);

  if (has("mesh")) {
    const std::string m = get("mesh");
    if (m == "uniform") c.mesh = MeshKind::Uniform;
    else if (m == "scatterer") c.mesh = MeshKind::Scatterer;
    else if (m == "layer") c.mesh = MeshKind::Layer;
    else throw ConfigError(fmt::format("unknown mesh '{}'", m));
  }
  if (has("h")) c.h = to_doubles("h", get("h"));
  if (c.h.empty()) throw ConfigError("missing key 'h'");
  for (double h : c.h) require_positive("h", h);

  if (has("box")) {
    const auto b = to_doubles("box", get("box"));
    if (b.size() != 4) throw ConfigError("box needs [x0,x1,y0,y1]");
    c.box = {b[0], b[1], b[2], b[3]};
  }
  if (!(c.box.x0 < c.box.x1 && c.box.y0 < c.box.y1)) throw ConfigError("box is empty");
  if (has("n_inside")) c.n_inside = parse_complex(get("n_inside"));
  if (!(c.n_inside.real() > 0.0) || c.n_inside.imag() < 0.0) {
    throw ConfigError("n_inside needs Re > 0 and Im >= 0");
  }
  if (has("interior_factor")) c.interior_factor = to_double("interior_factor", get("interior_factor"));
  if (!(c.interior_factor > 0.0 && c.interior_factor <= 1.0)) {
    throw ConfigError("interior_factor must lie in (0, 1]");
  }
  if (has("layer")) {
    const auto l = to_doubles("layer", get("layer"));
    if (l.size() != 2) throw ConfigError("layer needs [x0,x1]");
    c.layer_x0 = l[0];
    c.layer_x1 = l[1];
  }
  if (has("layer_levels")) c.layer_levels = to_int("layer_levels", get("layer_levels"));
  if (c.mesh == MeshKind::Layer) {
    if (c.layer_levels < 1) throw ConfigError("layer_levels must be >= 1");
    if (!(c.layer_x0 <= c.layer_x1 && c.layer_x0 > -c.R && c.layer_x1 < c.R)) {
      throw ConfigError("layer must satisfy -R < x0 <= x1 < R");
    }
  }

  if (has("Np")) c.Np = to_ints("Np", get("Np"));
  if (c.Np.empty()) throw ConfigError("missing key 'Np'");
  for (int np : c.Np)
    if (np < 3) throw ConfigError(fmt::format("Np = {} < 3", np));
  if (has("M")) {
    c.M = to_ints("M", get("M"));
  } else if (c.kind != ExperimentKind::NtdSweep) {
    // last propagating index plus 13: M = 15 at k = 8, H = 1
    const int last_propagating = static_cast<int>(std::ceil(c.k * c.H / pi)) - 1;
    c.M = {last_propagating + 13};
  }
  for (int m : c.M)
    if (m < 1) throw ConfigError(fmt::format("M = {} < 1", m));
  if (has("gamma")) c.gamma = to_doubles("gamma", get("gamma"));
  for (double g : c.gamma)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError(fmt::format("gamma = {} must be >= 0", g));

  if (has("incident")) {
    const std::string s = get("incident");
    if (s == "mode") c.incident = IncidentKind::Mode;
    else if (s == "fundamental") c.incident = IncidentKind::Fundamental;
    else throw ConfigError(fmt::format("unknown incident '{}'", s));
  }
  if (has("mode")) c.mode = to_int("mode", get("mode"));
  if (c.mode < 0) throw ConfigError("mode must be >= 0");
  if (has("direction")) {
    const std::string s = get("direction");
    if (s == "right") c.leftward = false;
    else if (s == "left") c.leftward = true;
    else throw ConfigError(fmt::format("direction must be left or right, got '{}'", s));
  }
  c.source = {-1.5 * c.R, 0.3 * c.H};
  if (has("source")) {
    const auto s = to_doubles("source", get("source"));
    if (s.size() != 2) throw ConfigError("source needs [x,y]");
    c.source = {s[0], s[1]};
  }
  if (has("Nf")) c.Nf = to_int("Nf", get("Nf"));
  if (c.Nf < 0) throw ConfigError("Nf must be >= 0");

  if (has("reference")) {
    const std::string s = get("reference");
    if (s == "exact") c.reference = ReferenceKind::Exact;
    else if (s == "overkill") c.reference = ReferenceKind::Overkill;
    else throw ConfigError(fmt::format("unknown reference '{}'", s));
  }
  const bool has_scatterer = c.mesh == MeshKind::Scatterer && c.n_inside != cplx{1.0, 0.0};
  if (c.reference == ReferenceKind::Exact && has_scatterer) {
    throw ConfigError("no exact reference with a scatterer; use reference=overkill");
  }
  if (has("overkill_h_divisor")) {
    c.overkill_h_divisor = to_double("overkill_h_divisor", get("overkill_h_divisor"));
  }
  if (!(c.overkill_h_divisor == 0.0 || c.overkill_h_divisor >= 1.0)) {
    throw ConfigError("overkill_h_divisor must be 0 (automatic) or >= 1");
  }
  if (has("overkill_extra_directions")) {
    c.overkill_extra_directions = to_int("overkill_extra_directions", get("overkill_extra_directions"));
  }
  if (c.overkill_extra_directions < 0) throw ConfigError("overkill_extra_directions must be >= 0");

  if (has("modes")) c.modes = to_int("modes", get("modes"));
  if (c.modes < 0) throw ConfigError("modes must be >= 0");
  if (has("cutoff_tol")) c.cutoff_tol = to_double("cutoff_tol", get("cutoff_tol"));
  require_positive("cutoff_tol", c.cutoff_tol);
  if (has("quad_extra")) c.quad_extra = to_int("quad_extra", get("quad_extra"));
  if (c.quad_extra < 0) throw ConfigError("quad_extra must be >= 0");
  if (has("timing")) {
    const std::string s = get("timing");
    if (s == "true" || s == "1") c.timing = true;
    else if (s == "false" || s == "0") c.timing = false;
    else throw ConfigError(fmt::format("timing must be true or false, got '{}'", s));
  }
  if (has("out")) c.out = get("out");

  const int J = c.spectrum_size();
  for (int m : c.M)
    if (m > J) throw ConfigError(fmt::format("M = {} exceeds modes = {}", m, J));
  if (c.incident == IncidentKind::Mode && c.mode >= J) {
    throw ConfigError(fmt::format("incident mode {} exceeds modes = {}", c.mode, J));
  }
  if (c.incident == IncidentKind::Fundamental && c.Nf >= J) {
    throw ConfigError(fmt::format("Nf = {} needs modes > Nf", c.Nf));
  }
  if (c.incident == IncidentKind::Fundamental && std::abs(c.source.x) <= c.R) {
    throw ConfigError("fundamental source must satisfy |x_1| > R");
  }
  try {
    (void)build_modal(c.H, c.k, J, c.cutoff_tol);
  } catch (const CutoffWavenumber& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  return parse_config(in);
}

}  // namespace tdgwg
