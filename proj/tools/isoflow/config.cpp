#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "isoflow/errors.hpp"

namespace isoflow::app {

using nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Soliton: return "soliton";
    case Experiment::Evolve: return "evolve";
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Scatter: return "scatter";
    case Experiment::LaxCheck: return "lax-check";
    case Experiment::TensorDemo: return "tensor-demo";
  }
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"soliton", "evolve",    "spectrum",
                                              "scatter", "lax-check", "tensor-demo"};
  return names;
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  static const std::map<std::string, Experiment> table{
      {"soliton", Experiment::Soliton},   {"evolve", Experiment::Evolve},
      {"spectrum", Experiment::Spectrum}, {"scatter", Experiment::Scatter},
      {"lax-check", Experiment::LaxCheck}, {"tensor-demo", Experiment::TensorDemo}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Zero: return "zero";
    case InitialKind::Soliton: return "soliton";
    case InitialKind::TwoSoliton: return "two-soliton";
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::File: return "file";
  }
  return "unknown";
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table{
      {"transport", 1e-6},      // soliton sup error vs analytic translate
      {"isospectral", 1e-4},    // bound-state eigenvalue drift
      {"invariants", 1e-7},     // relative drift of i1, i2, i3
      {"wronskian", 1e-6},      // | |a|^2 - |b|^2 - 1 |
      {"scattering", 1e-4},     // a drift and |b| drift
      {"reflectionless", 1e-5}, // |b| for soliton data
      {"cubic_fit", 1e-2},      // relative residual of rate = c k^3
      {"lax", 1e-3},            // Lax residual at lax.delta
      {"lax_order", 3.2},       // minimum residual ratio per halving of delta
      {"unitarity", 1e-8},      // ||U^H U - I||
      {"conjugation", 1e-3},    // ||U h0 U^H - h(s)|| / ||h(s)||
      {"canonical", 1e-9},      // commutator covariance and position spectrum
      {"kronecker", 1e-10},     // 2D spectrum vs pairwise sums
      {"tensor_isospectral", 2e-3},
      {"coupling", 0.1},        // minimum mixed-partial coupling witness
      {"witness", 1e-3},        // minimum nonfactorizability witness at s > 0
  };
  return table;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<std::string> closest_name(const std::string& key,
                                        const std::vector<std::string>& candidates) {
  std::optional<std::string> best;
  std::size_t best_d = std::max<std::size_t>(2, key.size() / 2) + 1;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

// Reads one JSON object strictly: every key must be claimed by a getter or
// it is reported as unknown by finish().
class Section {
 public:
  Section(const json& node, std::string path, std::vector<Diagnostic>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {}

  bool valid() const { return node_.is_object(); }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    claimed_.insert(key);
    return node_.is_object() && node_.contains(key);
  }

  void error(const std::string& key, const std::string& message) {
    errors_.push_back({field(key), message});
  }

  template <class T>
  void get(const std::string& key, T& out, bool required) {
    if (!has(key)) {
      if (required) error(key, "missing required field");
      return;
    }
    read(key, node_.at(key), out);
  }

  std::optional<Section> sub(const std::string& key, bool required) {
    if (!has(key)) {
      if (required) error(key, "missing required section");
      return std::nullopt;
    }
    const json& child = node_.at(key);
    if (!child.is_object()) {
      error(key, "expected an object");
      return std::nullopt;
    }
    return Section(child, field(key), errors_);
  }

  const json* raw(const std::string& key) {
    if (!has(key)) return nullptr;
    return &node_.at(key);
  }

  void finish() {
    if (!node_.is_object()) return;
    const std::vector<std::string> known(claimed_.begin(), claimed_.end());
    for (const auto& item : node_.items()) {
      if (claimed_.count(item.key())) continue;
      std::string message = "unknown key";
      if (auto hint = closest_name(item.key(), known)) {
        message += "; did you mean \"" + *hint + "\"?";
      }
      error(item.key(), message);
    }
  }

  void read(const std::string& key, const json& v, double& out) {
    if (!v.is_number()) return error(key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) error(key, "must be finite");
  }

  void read(const std::string& key, const json& v, std::size_t& out) {
    if (v.is_number_unsigned()) {
      out = v.get<std::size_t>();
    } else if (v.is_number_integer()) {
      error(key, "must be non-negative (got " + v.dump() + ")");
    } else {
      error(key, "expected a non-negative integer");
    }
  }

  void read(const std::string& key, const json& v, bool& out) {
    if (!v.is_boolean()) return error(key, "expected true or false");
    out = v.get<bool>();
  }

  void read(const std::string& key, const json& v, std::string& out) {
    if (!v.is_string()) return error(key, "expected a string");
    out = v.get<std::string>();
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<Diagnostic>& errors_;
  std::set<std::string> claimed_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void read_grid(Section& s, GridConfig& g) {
  s.get("n", g.n, true);
  s.get("length", g.length, true);
  std::string kind = "periodic";
  s.get("kind", kind, false);
  if (kind == "periodic") {
    g.kind = BoundaryKind::Periodic;
  } else if (kind == "box") {
    g.kind = BoundaryKind::BoxDirichlet;
  } else {
    s.error("kind", "expected \"periodic\" or \"box\" (got \"" + kind + "\")");
  }
  s.finish();
}

void read_flow(Section& s, FlowConfig& f) {
  s.get("ds", f.ds, true);
  s.get("s_target", f.s_target, true);
  s.get("snapshots", f.snapshots, false);
  std::string scheme = to_string(f.scheme);
  s.get("scheme", scheme, false);
  if (scheme == "ifrk4") {
    f.scheme = KdvScheme::IntegratingFactorRK4;
  } else if (scheme == "etdrk4") {
    f.scheme = KdvScheme::ETDRK4;
  } else {
    s.error("scheme", "expected \"ifrk4\" or \"etdrk4\" (got \"" + scheme + "\")");
  }
  s.get("dealias", f.dealias, false);
  s.finish();
}

void read_soliton(Section& s, SolitonParams& p) {
  s.get("lambda", p.lambda, true);
  s.get("q0", p.q0, true);
  s.finish();
}

void read_initial(Section& s, InitialConfig& init, std::vector<Diagnostic>& errors) {
  std::string kind;
  s.get("kind", kind, true);
  if (kind == "zero") {
    init.kind = InitialKind::Zero;
  } else if (kind == "soliton") {
    init.kind = InitialKind::Soliton;
    SolitonParams p;
    read_soliton(s, p);
    init.solitons = {p};
    return;
  } else if (kind == "two-soliton") {
    init.kind = InitialKind::TwoSoliton;
    const json* list = s.raw("solitons");
    if (list == nullptr) {
      s.error("solitons", "missing required field");
    } else if (!list->is_array() || list->size() != 2) {
      s.error("solitons", "expected an array of two {lambda, q0} objects");
    } else {
      for (std::size_t i = 0; i < 2; ++i) {
        Section item((*list)[i], s.field("solitons") + "[" + std::to_string(i) + "]", errors);
        if (!item.valid()) {
          errors.push_back({s.field("solitons") + "[" + std::to_string(i) + "]",
                            "expected an object"});
          continue;
        }
        SolitonParams p;
        read_soliton(item, p);
        init.solitons.push_back(p);
      }
    }
  } else if (kind == "gaussian") {
    init.kind = InitialKind::Gaussian;
    s.get("amplitude", init.amplitude, true);
    s.get("width", init.width, false);
    s.get("center", init.center, false);
  } else if (kind == "file") {
    init.kind = InitialKind::File;
    std::string path;
    s.get("path", path, true);
    init.path = path;
  } else if (!kind.empty()) {
    s.error("kind", "expected one of zero, soliton, two-soliton, gaussian, file (got \"" + kind +
                        "\")");
  }
  s.finish();
}

void read_scattering(Section& s, ScatteringConfig& c) {
  s.get("k_min", c.k_min, false);
  s.get("k_max", c.k_max, false);
  s.get("k_count", c.k_count, false);
  s.get("fit_k_min", c.fit_k_min, false);
  s.get("fit_k_max", c.fit_k_max, false);
  s.finish();
}

void read_lax(Section& s, LaxConfig& c) {
  s.get("delta", c.delta, false);
  if (s.has("snapshot")) {
    std::size_t j = 0;
    s.get("snapshot", j, false);
    c.snapshot = j;
  }
  if (const json* list = s.raw("order_deltas")) {
    if (!list->is_array() || list->size() < 2 ||
        !std::all_of(list->begin(), list->end(), [](const json& x) { return x.is_number(); })) {
      s.error("order_deltas", "expected an array of at least two numbers");
    } else {
      c.order_deltas = list->get<std::vector<double>>();
    }
  }
  s.get("substeps", c.substeps, false);
  s.finish();
}

void read_tensor(Section& s, TensorConfig& c) {
  s.get("axis_n", c.axis_n, false);
  if (s.has("axis_length")) {
    double len = 0.0;
    s.get("axis_length", len, false);
    c.axis_length = len;
  }
  s.get("probe_half_width", c.probe_half_width, false);
  s.get("lattice", c.lattice, false);
  s.get("probe_step", c.probe_step, false);
  s.finish();
}

void read_output(Section& s, OutputConfig& c) {
  std::string dir = c.directory.string();
  s.get("directory", dir, false);
  c.directory = dir;
  if (const json* list = s.raw("formats")) {
    if (!list->is_array() ||
        !std::all_of(list->begin(), list->end(), [](const json& x) { return x.is_string(); })) {
      s.error("formats", "expected an array of strings");
    } else {
      std::string joined;
      for (const auto& f : *list) joined += (joined.empty() ? "" : ",") + f.get<std::string>();
      if (auto err = apply_formats(c, joined)) s.error("formats", *err);
    }
  }
  s.finish();
}

void read_tolerances(Section& s, std::map<std::string, double>& tol) {
  for (auto& [name, value] : tol) {
    if (!s.has(name)) continue;
    double v = 0.0;
    s.get(name, v, false);
    if (!(v > 0.0)) {
      s.error(name, "tolerance must be positive");
    } else {
      value = v;
    }
  }
  s.finish();
}

}  // namespace

std::optional<std::string> apply_formats(OutputConfig& out, const std::string& list) {
  out.csv = out.json = out.svg = false;
  std::stringstream ss(list);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      out.csv = true;
    } else if (item == "json") {
      out.json = true;
    } else if (item == "svg") {
      out.svg = true;
    } else {
      return "unknown format \"" + item + "\" (expected csv, json, svg)";
    }
    any = true;
  }
  if (!any) return std::string("at least one format is required");
  return std::nullopt;
}

ConfigResult parse_config(const std::string& text, const std::filesystem::path& source) {
  ConfigResult result;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    if (auto pos = what.find(": ", what.find("column")); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    result.errors.push_back({"<parse>", "line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + ": " + what});
    return result;
  }
  if (!root.is_object()) {
    result.errors.push_back({"<root>", "expected a JSON object"});
    return result;
  }

  RunConfig cfg;
  cfg.source = source;
  cfg.tolerances = default_tolerances();
  auto& errors = result.errors;
  Section top(root, "", errors);

  std::string experiment;
  if (top.has("experiment")) {
    top.get("experiment", experiment, false);
    if (auto e = parse_experiment(experiment)) {
      cfg.experiment = e;
    } else if (!experiment.empty()) {
      std::string message = "unknown experiment \"" + experiment + "\"";
      if (auto hint = closest_name(experiment, experiment_names())) {
        message += "; did you mean \"" + *hint + "\"?";
      }
      top.error("experiment", message);
    }
  }
  if (auto s = top.sub("grid", true)) read_grid(*s, cfg.grid);
  if (auto s = top.sub("flow", true)) read_flow(*s, cfg.flow);
  if (auto s = top.sub("initial", true)) read_initial(*s, cfg.initial, errors);
  if (auto s = top.sub("scattering", false)) read_scattering(*s, cfg.scattering);
  if (auto s = top.sub("lax", false)) read_lax(*s, cfg.lax);
  if (auto s = top.sub("tensor", false)) read_tensor(*s, cfg.tensor);
  if (auto s = top.sub("output", false)) read_output(*s, cfg.output);
  if (auto s = top.sub("tolerances", false)) read_tolerances(*s, cfg.tolerances);
  top.finish();

  if (result.ok()) result.config = std::move(cfg);
  return result;
}

ConfigResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigResult result;
    result.errors.push_back({"<file>", "cannot read " + path.string()});
    return result;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

namespace {

std::vector<double> read_profile_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("initial.path: cannot read " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw PreconditionError("initial.path: line " + std::to_string(lineno) +
                              ": expected two columns q,V");
    }
    double q = 0.0;
    double v = 0.0;
    try {
      q = std::stod(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      if (values.empty() && lineno == 1) continue;  // header row
      throw PreconditionError("initial.path: line " + std::to_string(lineno) +
                              ": not a number");
    }
    const std::size_t i = values.size();
    if (i < grid.n() && std::abs(q - grid.point(i)) > 1e-9 * grid.length()) {
      throw PreconditionError("initial.path: line " + std::to_string(lineno) + ": q = " +
                              std::to_string(q) + " does not match grid point " +
                              std::to_string(grid.point(i)));
    }
    values.push_back(v);
  }
  if (values.size() != grid.n()) {
    throw PreconditionError("initial.path: expected " + std::to_string(grid.n()) +
                            " rows, got " + std::to_string(values.size()));
  }
  return values;
}

}  // namespace

Field make_initial_field(const RunConfig& cfg, const Grid& grid) {
  const InitialConfig& init = cfg.initial;
  for (const auto& p : init.solitons) {
    if (!(p.lambda > 0.0)) throw PreconditionError("initial: soliton lambda must be positive");
  }
  switch (init.kind) {
    case InitialKind::Zero:
      return Field(grid);
    case InitialKind::Soliton:
      return soliton_potential(grid, init.solitons.at(0), 0.0);
    case InitialKind::TwoSoliton:
      return soliton_potential(grid, init.solitons.at(0), 0.0) +
             soliton_potential(grid, init.solitons.at(1), 0.0);
    case InitialKind::Gaussian: {
      if (!(init.width > 0.0)) throw PreconditionError("initial.width must be positive");
      const double a = init.amplitude;
      const double w = init.width;
      const double c = init.center;
      return sample(grid, [=](double q) { return a * std::exp(-((q - c) / w) * ((q - c) / w)); });
    }
    case InitialKind::File: {
      std::filesystem::path path = init.path;
      if (path.is_relative() && !cfg.source.empty()) path = cfg.source.parent_path() / path;
      return Field(grid, read_profile_csv(path, grid));
    }
  }
  throw PreconditionError("initial: unsupported kind");
}

std::vector<Diagnostic> check_preconditions(const RunConfig& cfg,
                                            std::optional<Experiment> experiment) {
  std::vector<Diagnostic> out;
  const Experiment e = experiment.value_or(cfg.experiment.value_or(Experiment::Evolve));
  auto fail = [&](const std::string& field, const std::string& message) {
    out.push_back({field, message});
  };

  std::optional<Grid> grid;
  try {
    grid = make_grid(cfg.grid.n, cfg.grid.length, cfg.grid.kind);
  } catch (const PreconditionError& err) {
    fail("grid", std::string("core_grid.make_grid: ") + err.what());
  }

  const bool static_spectrum = e == Experiment::Spectrum && grid && !grid->periodic();
  if (grid && !grid->periodic() && !static_spectrum) {
    fail("grid.kind", std::string(to_string(e)) +
                          " evolves the potential and needs a periodic grid (box grids are "
                          "supported by the spectrum experiment only)");
  }
  if (!(cfg.flow.s_target > 0.0)) fail("flow.s_target", "must be positive");
  if (cfg.flow.snapshots < 1) fail("flow.snapshots", "must be at least 1");
  if (cfg.flow.ds > 0.0 && cfg.flow.s_target / cfg.flow.ds < 1.0) {
    fail("flow.ds", "kdv_flow.evolve: s_target / ds must be >= 1");
  }
  if (grid && grid->periodic()) {
    try {
      validate(KdvParams{cfg.flow.ds, cfg.flow.scheme, cfg.flow.dealias}, *grid);
    } catch (const PreconditionError& err) {
      fail("flow.ds", std::string("kdv_flow.KdvParams: ") + err.what());
    }
  } else if (!(cfg.flow.ds > 0.0)) {
    fail("flow.ds", "must be positive");
  }

  if (grid) {
    try {
      (void)make_initial_field(cfg, *grid);
    } catch (const PreconditionError& err) {
      fail("initial", err.what());
    } catch (const std::exception& err) {
      fail("initial", err.what());
    }
  }

  const auto& sc = cfg.scattering;
  if (!(sc.k_min > 0.0)) fail("scattering.k_min", "must be positive");
  if (!(sc.k_max > sc.k_min)) fail("scattering.k_max", "must exceed k_min");
  if (sc.k_count < 1) fail("scattering.k_count", "must be at least 1");
  if (!(sc.fit_k_max > sc.fit_k_min)) fail("scattering.fit_k_max", "must exceed fit_k_min");

  switch (e) {
    case Experiment::Soliton:
      if (cfg.initial.kind != InitialKind::Soliton) {
        fail("initial.kind", "the soliton experiment needs kind \"soliton\"");
      }
      break;
    case Experiment::LaxCheck: {
      const auto& lx = cfg.lax;
      if (!(lx.delta > 0.0)) fail("lax.delta", "must be positive");
      if (std::any_of(lx.order_deltas.begin(), lx.order_deltas.end(),
                      [](double d) { return !(d > 0.0); })) {
        fail("lax.order_deltas", "all entries must be positive");
      }
      if (lx.snapshot && *lx.snapshot > cfg.flow.snapshots) {
        fail("lax.snapshot", "index exceeds flow.snapshots (" +
                                 std::to_string(cfg.flow.snapshots) + ")");
      }
      if (lx.substeps < 1) fail("lax.substeps", "must be at least 1");
      if (cfg.grid.n > 512) fail("grid.n", "lax-check uses dense exponentials; n <= 512");
      break;
    }
    case Experiment::TensorDemo: {
      const auto& t = cfg.tensor;
      if (t.axis_n < 8 || t.axis_n % 2 != 0 || t.axis_n * t.axis_n > 4096) {
        fail("tensor.axis_n", "tensor_demo.build_2d_hamiltonian: need an even axis_n in [8, 64] "
                              "(n^2 <= 4096), got " + std::to_string(t.axis_n));
      }
      if (t.lattice < 2) fail("tensor.lattice", "must be at least 2");
      if (!(t.probe_step > 0.0)) fail("tensor.probe_step", "must be positive");
      const double axis_length = t.axis_length.value_or(cfg.grid.length);
      if (!(axis_length > 0.0)) fail("tensor.axis_length", "must be positive");
      const double reach = std::numbers::sqrt2 * (t.probe_half_width + t.probe_step);
      if (!(t.probe_half_width > 0.0) || reach >= 0.5 * axis_length) {
        fail("tensor.probe_half_width",
             "tensor_demo.rotated_potential: rotated probe must stay inside the grid window");
      }
      if (cfg.grid.n > 512) fail("grid.n", "tensor-demo uses dense exponentials; n <= 512");
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace isoflow::app
