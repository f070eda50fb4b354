#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string output;  // stdout and stderr interleaved
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ISOFLOW_BINARY) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path dir =
      fs::temp_directory_path() / ("isoflow-cli-" + std::to_string(getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string soliton_config(const fs::path& out, const std::string& tolerances = "{}") {
  return R"({"experiment": "soliton",
    "grid": {"n": 320, "length": 40},
    "flow": {"ds": 5e-4, "s_target": 1, "snapshots": 1},
    "initial": {"kind": "soliton", "lambda": 4, "q0": -4},
    "tolerances": )" + tolerances + R"(,
    "output": {"directory": ")" + out.string() + R"("}})";
}

}  // namespace

TEST_CASE("shipped configurations validate") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(ISOFLOW_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const Run r = run("validate " + entry.path().string());
    CAPTURE(entry.path());
    CHECK(r.code == 0);
    CHECK(r.output.ends_with("ok\n"));  // stderr may carry edge warnings
  }
  CHECK(count >= 6);
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path dir = scratch("config-errors");
  const Run bad_n = run("validate " + write_config(dir, R"({"grid": {"n": 3, "length": 10},
      "flow": {"ds": 1e-3, "s_target": 1}, "initial": {"kind": "zero"}})").string());
  CHECK(bad_n.code == 2);
  CHECK(bad_n.output.find("error: grid: core_grid.make_grid") != std::string::npos);

  const Run typo = run("evolve --config " + write_config(dir, R"({"grid": {"n": 64, "length": 10},
      "flow": {"dt": 1e-3, "s_target": 1}, "initial": {"kind": "zero"}})").string());
  CHECK(typo.code == 2);
  CHECK(typo.output.find("flow.dt: unknown key; did you mean \"ds\"?") != std::string::npos);

  const Run syntax = run("validate " + write_config(dir, "{\"grid\": }").string());
  CHECK(syntax.code == 2);
  CHECK(syntax.output.find("line 1, column") != std::string::npos);

  CHECK(run("no-such-command").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("evolve").code == 2);
  CHECK(run("validate /nonexistent.json").code == 2);
}

TEST_CASE("experiment mismatch is rejected") {
  const fs::path dir = scratch("mismatch");
  const Run r = run("scatter --config " + write_config(dir, soliton_config(dir / "out")).string());
  CHECK(r.code == 2);
  CHECK(r.output.find("config is for \"soliton\"") != std::string::npos);
}

TEST_CASE("zero data is a fixed point") {
  const fs::path dir = scratch("zero");
  const auto cfg = write_config(dir, R"({"grid": {"n": 64, "length": 10},
      "flow": {"ds": 1e-3, "s_target": 0.1, "snapshots": 2}, "initial": {"kind": "zero"},
      "output": {"directory": ")" + (dir / "out").string() + R"("}})");
  const Run r = run("evolve --config " + cfg.string());
  CHECK(r.code == 0);
  for (const char* name : {"profile_000.csv", "profile_002.csv"}) {
    const auto rows = read_csv(dir / "out" / name);
    REQUIRE(rows.size() == 64);
    for (const auto& row : rows) CHECK(row[1] == 0.0);
  }
  for (const auto& row : read_csv(dir / "out" / "invariants.csv")) {
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
  }
  const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["status"] == "ok");
  CHECK(report["exit_code"] == 0);
}

TEST_CASE("soliton minimum moves by lambda * s") {
  const fs::path dir = scratch("soliton");
  const Run r = run("soliton --config " + write_config(dir, soliton_config(dir / "out")).string());
  CHECK(r.code == 0);
  for (auto [file, expected] : {std::pair{"profile_000.csv", -4.0}, std::pair{"profile_001.csv", 0.0}}) {
    const auto rows = read_csv(dir / "out" / file);
    const auto it = std::min_element(rows.begin(), rows.end(),
                                     [](const auto& a, const auto& b) { return a[1] < b[1]; });
    CAPTURE(file);
    CHECK(std::abs((*it)[0] - expected) <= 0.5 * 40.0 / 320.0);
    CHECK((*it)[1] == doctest::Approx(-2.0).epsilon(1e-3));
  }
}

TEST_CASE("a failed invariant exits with 4") {
  const fs::path dir = scratch("invariant");
  const Run r = run("soliton --config " +
                    write_config(dir, soliton_config(dir / "out", R"({"transport": 1e-14})")).string());
  CHECK(r.code == 4);
  CHECK(r.output.find("FAIL") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["exit_code"] == 4);
}

TEST_CASE("a blow-up exits with 3") {
  const fs::path dir = scratch("blowup");
  const auto cfg = write_config(dir, R"({"grid": {"n": 256, "length": 40},
      "flow": {"ds": 1e-3, "s_target": 1, "snapshots": 2},
      "initial": {"kind": "gaussian", "amplitude": 100, "width": 0.3},
      "output": {"directory": ")" + (dir / "out").string() + R"("}})");
  const Run r = run("evolve --config " + cfg.string());
  CHECK(r.code == 3);
  CHECK(r.output.find("blow-up") != std::string::npos);
}

TEST_CASE("reruns are byte-identical and --format filters outputs") {
  const fs::path dir = scratch("rerun");
  const auto cfg = write_config(dir, soliton_config(dir / "unused")).string();
  REQUIRE(run("soliton --config " + cfg + " --out " + (dir / "a").string()).code == 0);
  REQUIRE(run("soliton --config " + cfg + " --out " + (dir / "b").string() + " --seed-none").code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    ++files;
    CAPTURE(entry.path().filename());
    CHECK(slurp(entry.path()) == slurp(dir / "b" / entry.path().filename()));
  }
  CHECK(files >= 4);
  CHECK_FALSE(fs::exists(dir / "a" / "profiles.svg"));

  REQUIRE(run("soliton --config " + cfg + " --out " + (dir / "c").string() + " --format svg").code == 0);
  CHECK(fs::exists(dir / "c" / "profiles.svg"));
  CHECK_FALSE(fs::exists(dir / "c" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "c" / "profile_000.csv"));
  CHECK(run("soliton --config " + cfg + " --format pdf").code == 2);
}
