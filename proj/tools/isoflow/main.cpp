#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"

using namespace isoflow::app;

namespace {

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << "error: " << d.field << ": " << d.message << "\n";
}

int validate_command(const std::string& path) {
  const ConfigResult parsed = load_config(path);
  if (!parsed.ok()) {
    print_diagnostics(parsed.errors);
    return kExitConfig;
  }
  const auto problems = check_preconditions(*parsed.config);
  if (!problems.empty()) {
    print_diagnostics(problems);
    return kExitConfig;
  }
  std::cout << "ok\n";
  return kExitOk;
}

int run_command(Experiment experiment, const std::string& path, const std::string& out,
                const std::string& formats) {
  ConfigResult parsed = load_config(path);
  if (!parsed.ok()) {
    print_diagnostics(parsed.errors);
    return kExitConfig;
  }
  RunConfig cfg = std::move(*parsed.config);
  if (cfg.experiment && *cfg.experiment != experiment) {
    std::cerr << "error: experiment: config is for \"" << to_string(*cfg.experiment)
              << "\" but \"" << to_string(experiment) << "\" was requested\n";
    return kExitConfig;
  }
  if (!out.empty()) cfg.output.directory = out;
  if (!formats.empty()) {
    if (auto err = apply_formats(cfg.output, formats)) {
      std::cerr << "error: --format: " << *err << "\n";
      return kExitConfig;
    }
  }

  const RunResult result = run_experiment(experiment, cfg);
  for (const auto& c : result.checks) {
    std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " = " << c.value << " (" << c.relation
              << ' ' << c.tolerance << ")\n";
  }
  if (!result.message.empty()) std::cerr << "error: " << result.message << "\n";
  std::cout << result.status << ": " << result.files.size() << " file(s) in "
            << cfg.output.directory.string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KdV isospectral-flow laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string formats;
  bool seed_none = false;  // accepted for interface compatibility; no randomness is used

  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--format", formats, "comma-separated subset of csv,json,svg");
    sub->add_flag("--seed-none", seed_none, "no-op: runs are deterministic");
  }
  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  std::string validate_path;
  validate->add_option("path", validate_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (validate->parsed()) return validate_command(validate_path);
  for (const auto& name : experiment_names()) {
    if (app.got_subcommand(name)) {
      return run_command(*parse_experiment(name), config_path, out_dir, formats);
    }
  }
  return kExitConfig;
}
