#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace isoflow::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInvariant = 4;

struct Check {
  std::string name;
  std::string invariant;  // module property the check traces to
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;   // "<=", ">=" or "=="
  bool pass = false;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string status;     // "ok", "invariant failure", "numerical failure", "config error"
  std::string message;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> files;  // written, relative to the output directory
};

// Runs one experiment and writes its artifacts into cfg.output.directory.
// Never throws for config or numerical problems; they map to exit codes.
RunResult run_experiment(Experiment experiment, const RunConfig& cfg);

}  // namespace isoflow::app
