#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isoflow/grid.hpp"
#include "isoflow/kdv.hpp"

namespace isoflow::app {

enum class Experiment { Soliton, Evolve, Spectrum, Scatter, LaxCheck, TensorDemo };

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);
const std::vector<std::string>& experiment_names();

enum class InitialKind { Zero, Soliton, TwoSoliton, Gaussian, File };

const char* to_string(InitialKind k);

struct GridConfig {
  std::size_t n = 0;
  double length = 0.0;
  BoundaryKind kind = BoundaryKind::Periodic;
};

struct FlowConfig {
  double ds = 0.0;
  double s_target = 0.0;
  std::size_t snapshots = 10;
  KdvScheme scheme = KdvScheme::IntegratingFactorRK4;
  bool dealias = true;
};

struct InitialConfig {
  InitialKind kind = InitialKind::Zero;
  std::vector<SolitonParams> solitons;  // one for soliton, two for two-soliton
  double amplitude = 0.5;               // gaussian: amplitude * exp(-((q-center)/width)^2)
  double width = 1.0;
  double center = 0.0;
  std::filesystem::path path;  // file: two-column CSV q,V matching the grid
};

struct ScatteringConfig {
  double k_min = 0.25;
  double k_max = 4.0;
  std::size_t k_count = 24;
  double fit_k_min = 0.5;
  double fit_k_max = 3.0;
};

struct LaxConfig {
  double delta = 1e-4;
  std::optional<std::size_t> snapshot;  // default: middle snapshot
  std::vector<double> order_deltas{1.6e-2, 8e-3, 4e-3, 2e-3};
  std::size_t substeps = 1;
};

// The 2D Hamiltonian lives on a coarser axis grid (axis_n points over
// axis_length, default grid.length); the nonfactorizability witness uses the
// unitary flow on the main grid.
struct TensorConfig {
  std::size_t axis_n = 32;
  std::optional<double> axis_length;
  double probe_half_width = 3.0;
  std::size_t lattice = 41;
  double probe_step = 0.05;
};

struct OutputConfig {
  std::filesystem::path directory = "isoflow-out";
  bool csv = true;
  bool json = true;
  bool svg = false;
};

struct RunConfig {
  std::optional<Experiment> experiment;
  GridConfig grid;
  FlowConfig flow;
  InitialConfig initial;
  ScatteringConfig scattering;
  LaxConfig lax;
  TensorConfig tensor;
  OutputConfig output;
  std::map<std::string, double> tolerances;  // every known name, overrides applied
  std::filesystem::path source;              // config file, for relative paths
};

// Names and defaults of all tolerances a config may override.
const std::map<std::string, double>& default_tolerances();

struct Diagnostic {
  std::string field;  // dotted path, e.g. "flow.ds"
  std::string message;
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty(); }
};

// Strict parse: unknown keys, wrong types and missing physics fields are
// errors. Parse errors carry "line L, column C" of the offending byte.
ConfigResult parse_config(const std::string& text, const std::filesystem::path& source = {});
ConfigResult load_config(const std::filesystem::path& path);

// Module preconditions (grid, flow guard, initial data, experiment limits).
// `experiment` overrides the config's own experiment when given.
std::vector<Diagnostic> check_preconditions(const RunConfig& cfg,
                                            std::optional<Experiment> experiment = std::nullopt);

// Initial potential described by cfg.initial, sampled on `grid`.
// Throws PreconditionError (bad parameters, unreadable or mismatched file).
Field make_initial_field(const RunConfig& cfg, const Grid& grid);

// Parses "csv,json,svg" into the output flags; returns an error message on
// unknown entries.
std::optional<std::string> apply_formats(OutputConfig& out, const std::string& list);

std::size_t edit_distance(const std::string& a, const std::string& b);
std::optional<std::string> closest_name(const std::string& key,
                                        const std::vector<std::string>& candidates);

}  // namespace isoflow::app
