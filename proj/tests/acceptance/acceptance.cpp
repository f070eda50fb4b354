// Acceptance suite: one PASS/FAIL line per criterion, measured values on the
// indented lines before it. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "config.hpp"
#include "experiments.hpp"
#include "isoflow/fourier.hpp"
#include "isoflow/kdv.hpp"
#include "isoflow/lax.hpp"
#include "isoflow/scattering.hpp"
#include "isoflow/schrodinger.hpp"
#include "isoflow/tensor.hpp"
#include "oracles.hpp"

using namespace isoflow;
namespace fs = std::filesystem;

namespace {

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  // Records value `relation` bound; returns whether it held.
  bool below(const std::string& what, double value, double bound) {
    return record(what, value, "<", bound, value < bound);
  }
  bool above(const std::string& what, double value, double bound) {
    return record(what, value, ">", bound, value > bound);
  }
  bool within(const std::string& what, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    std::printf("    %-58s %-12.4g in [%g, %g]%s\n", what.c_str(), value, lo, hi, ok ? "" : "  <-- FAIL");
    pass_ = pass_ && ok;
    return ok;
  }
  bool equal(const std::string& what, double value, double expected) {
    return record(what, value, "==", expected, value == expected);
  }
  void note(const std::string& what, double value) {
    std::printf("    %-58s %.10g\n", what.c_str(), value);
  }
  void fail(const std::string& why) {
    std::printf("    error: %s\n", why.c_str());
    pass_ = false;
  }

  bool finish(double seconds) const {
    std::printf("%s criterion %d: %s (%.1f s)\n", pass_ ? "PASS" : "FAIL", id_, title_.c_str(),
                seconds);
    std::fflush(stdout);
    return pass_;
  }

 private:
  bool record(const std::string& what, double value, const char* rel, double bound, bool ok) {
    std::printf("    %-58s %-12.4g %s %g%s\n", what.c_str(), value, rel, bound, ok ? "" : "  <-- FAIL");
    pass_ = pass_ && ok;
    return ok;
  }

  int id_;
  std::string title_;
  bool pass_ = true;
};

Field analytic_soliton(const Grid& grid, double lambda, double q0, double s) {
  std::vector<double> v(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) v[i] = oracle::soliton(lambda, q0, s, grid.point(i));
  return Field(grid, std::move(v));
}

Field gaussian(const Grid& grid) {
  std::vector<double> v(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) v[i] = 0.5 * std::exp(-grid.point(i) * grid.point(i));
  return Field(grid, std::move(v));
}

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Reference soliton trajectory shared by criteria 1, 2 and 4.
const FlowTrajectory& reference_soliton() {
  static const FlowTrajectory traj = [] {
    const Grid grid = make_grid(512, 60.0, BoundaryKind::Periodic);
    return evolve(analytic_soliton(grid, 4.0, -10.0, 0.0), 2.5, KdvParams{1e-4}, 10);
  }();
  return traj;
}

// Location of the minimum of the band-limited interpolant near grid index i.
double refine_minimum(const BandLimitedInterpolant& f, double center, double h) {
  double a = center - h;
  double b = center + h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (f(x1) < f(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return 0.5 * (a + b);
}

void criterion_1(Criterion& c) {
  const FlowTrajectory& traj = reference_soliton();
  double worst = 0.0;
  for (const auto& sample : traj.samples) {
    worst = std::max(worst, sup_diff(sample.field, analytic_soliton(traj.grid(), 4.0, -10.0, sample.s)));
  }
  c.note("final s", traj.samples.back().s);
  c.below("sup |V - analytic translate| over all snapshots", worst, 1e-6);
}

void criterion_2(Criterion& c) {
  const FlowTrajectory& traj = reference_soliton();
  const IsospectralityReport rep = isospectrality_report(traj, 1, 1e-4);
  double off = 0.0;
  for (const auto& e : rep.eigenvalues) off = std::max(off, std::abs(e[0] - oracle::soliton_bound_state(4.0)));
  c.note("bound states of h(0)", static_cast<double>(count_bound_states(traj.samples[0].field)));
  c.below("single soliton: eigenvalue drift across s", rep.max_drift, 1e-4);
  c.below("single soliton: max |E(s) + lambda/4|", off, 1e-4);

  // Two solitons overtaking each other.
  const Grid grid = make_grid(640, 80.0, BoundaryKind::Periodic);
  const Field v0 = analytic_soliton(grid, 4.0, -15.0, 0.0) + analytic_soliton(grid, 1.0, -5.0, 0.0);
  const FlowTrajectory two = evolve(v0, 8.0, KdvParams{1e-4}, 16);
  const IsospectralityReport rep2 = isospectrality_report(two, 2, 2e-3);
  double off_fast = 0.0;
  double off_slow = 0.0;
  for (const auto& e : rep2.eigenvalues) {
    off_fast = std::max(off_fast, std::abs(e[0] - oracle::soliton_bound_state(4.0)));
    off_slow = std::max(off_slow, std::abs(e[1] - oracle::soliton_bound_state(1.0)));
  }
  c.below("two solitons: max |E0(s) + 1|", off_fast, 2e-3);
  c.below("two solitons: max |E1(s) + 0.25|", off_slow, 2e-3);
  c.below("two solitons: eigenvalue drift across s", rep2.max_drift, 2e-3);

  // Outgoing pulses: fit each with the single-soliton profile of its lambda.
  const Field& vf = two.samples.back().field;
  const BandLimitedInterpolant interp(vf);
  const auto vals = vf.values();
  const std::size_t i_fast = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  const double c_fast = refine_minimum(interp, grid.point(i_fast), grid.spacing());
  std::size_t i_slow = 0;
  double v_slow = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    if (std::abs(grid.point(i) - c_fast) > 6.0 && vals[i] < v_slow) {
      v_slow = vals[i];
      i_slow = i;
    }
  }
  const double c_slow = refine_minimum(interp, grid.point(i_slow), grid.spacing());
  const double s_end = two.samples.back().s;
  std::vector<double> fit(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    fit[i] = oracle::soliton(4.0, c_fast, 0.0, grid.point(i)) + oracle::soliton(1.0, c_slow, 0.0, grid.point(i));
  }
  c.note("fast pulse centre (free flight would be 17)", c_fast);
  c.note("slow pulse centre (free flight would be 3)", c_slow);
  c.above("overtaking happened: fast centre - slow centre", c_fast - c_slow, 10.0);
  c.note("phase shift of the fast pulse", c_fast - (-15.0 + 4.0 * s_end));
  c.below("outgoing shape sup error vs fitted single solitons", sup_diff(vf, Field(grid, fit)), 1e-3);
}

void criterion_3(Criterion& c) {
  const Grid grid = make_grid(512, 60.0, BoundaryKind::Periodic);
  const FlowTrajectory traj = evolve(gaussian(grid), 1.0, KdvParams{1e-4}, 10);
  const KdvInvariants base = kdv_invariants(traj.samples.front().field);
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  for (const auto& s : traj.samples) {
    const KdvInvariants k = kdv_invariants(s.field);
    d1 = std::max(d1, std::abs(k.i1 - base.i1) / std::abs(base.i1));
    d2 = std::max(d2, std::abs(k.i2 - base.i2) / std::abs(base.i2));
    d3 = std::max(d3, std::abs(k.i3 - base.i3) / std::abs(base.i3));
  }
  c.below("gaussian: relative drift of i1 over s in [0,1]", d1, 1e-7);
  c.below("gaussian: relative drift of i2", d2, 1e-7);
  c.below("gaussian: relative drift of i3", d3, 1e-7);
  const KdvInvariants sol = kdv_invariants(analytic_soliton(grid, 4.0, 0.0, 0.0));
  c.below("soliton lambda=4: |i1 - (-2 sqrt(lambda))|", std::abs(sol.i1 - oracle::soliton_mass(4.0)), 1e-6);
}

const FlowScatteringReport& gaussian_scattering() {
  static const FlowScatteringReport rep = [] {
    const Grid grid = make_grid(512, 60.0, BoundaryKind::Periodic);
    const FlowTrajectory traj = evolve(gaussian(grid), 0.05, KdvParams{1e-4}, 20);
    const auto ks = log_spaced_wavenumbers(0.25, 4.0, 24);
    return flow_scattering_report(traj, ks);
  }();
  return rep;
}

void criterion_4(Criterion& c) {
  const FlowScatteringReport& rep = gaussian_scattering();
  c.below("gaussian: max |a(k,s) - a(k,0)|", *std::max_element(rep.a_drift.begin(), rep.a_drift.end()), 1e-4);
  c.below("gaussian: max ||b(k,s)| - |b(k,0)||",
          *std::max_element(rep.b_modulus_drift.begin(), rep.b_modulus_drift.end()), 1e-4);
  c.below("gaussian: max | |a|^2 - |b|^2 - 1 |", rep.max_wronskian_defect, 1e-6);
  double b_min = 1e300;
  for (const auto& b : rep.per_snapshot.front().b) b_min = std::min(b_min, std::abs(b));
  c.above("gaussian: min_k |b(k,0)| (reflection is present)", b_min, 1e-8);

  const FlowTrajectory& sol = reference_soliton();
  const auto ks = log_spaced_wavenumbers(0.25, 4.0, 24);
  double max_b = 0.0;
  double a_err = 0.0;
  double wr = 0.0;
  const double kappa = 0.5 * std::sqrt(4.0);
  for (const auto& sample : sol.samples) {
    const ScatteringData d = scattering_coefficients(sample.field, ks);
    wr = std::max(wr, d.max_wronskian_defect);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      max_b = std::max(max_b, std::abs(d.b[i]));
      a_err = std::max(a_err, std::abs(d.a[i] - oracle::reflectionless_a(ks[i], kappa)));
    }
  }
  c.below("soliton: max |b(k,s)| over all snapshots", max_b, 1e-5);
  c.below("soliton: max |a(k,s) - (k - i kappa)/(k + i kappa)|", a_err, 1e-5);
  c.below("soliton: max | |a|^2 - |b|^2 - 1 |", wr, 1e-6);
}

// Frozen after the first verified run: arg b(k,s) - arg b(k,0) = 8 k^3 s.
constexpr double kFrozenCubicCoefficient = 8.0;

void criterion_5(Criterion& c) {
  const FlowScatteringReport& rep = gaussian_scattering();
  // Independent line fits of the unwrapped phases.
  std::vector<double> k3;
  std::vector<double> rate;
  double worst_line = 0.0;
  for (std::size_t i = 0; i < rep.k_values.size(); ++i) {
    const double k = rep.k_values[i];
    if (k < 0.5 || k > 3.0 || !rep.phase_valid[i]) continue;
    const double r = oracle::slope_through_origin(rep.s_values, rep.phase_shift[i]);
    double res = 0.0;
    for (std::size_t j = 0; j < rep.s_values.size(); ++j) {
      res = std::max(res, std::abs(rep.phase_shift[i][j] - r * rep.s_values[j]));
    }
    worst_line = std::max(worst_line, res / std::abs(r * rep.s_values.back()));
    k3.push_back(k * k * k);
    rate.push_back(r);
  }
  const double coeff = oracle::slope_through_origin(k3, rate);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < k3.size(); ++i) {
    num += (rate[i] - coeff * k3[i]) * (rate[i] - coeff * k3[i]);
    den += rate[i] * rate[i];
  }
  c.note("k values in the fit", static_cast<double>(k3.size()));
  c.below("phase linear in s: max relative deviation from the line", worst_line, 1e-2);
  c.below("rate = c k^3: relative fit residual", std::sqrt(num / den), 1e-2);
  c.note("fitted c", coeff);
  c.below("|c - frozen baseline 8| / 8", std::abs(coeff - kFrozenCubicCoefficient) / kFrozenCubicCoefficient, 1e-3);
  c.below("library cubic fit agrees with the test fit", std::abs(rep.cubic_coefficient - coeff) / coeff, 1e-9);
}

std::vector<double> lax_ratios;

void criterion_6(Criterion& c) {
  const Grid grid = make_grid(256, 40.0, BoundaryKind::Periodic);
  const FlowTrajectory traj = evolve(analytic_soliton(grid, 4.0, 0.0, 0.0), 0.02, KdvParams{1e-4}, 2);
  const LaxResidual r = lax_residual(traj, 1, 1e-4);
  c.below("residual at delta = 1e-4, n = 256", r.value, 1e-3);
  c.note("n x n commutator without padding (diagnostic)", r.unpadded_value);
  const std::vector<double> deltas{1.6e-2, 8e-3, 4e-3, 2e-3};
  std::vector<double> res;
  for (double d : deltas) res.push_back(lax_residual(traj, 1, d).value);
  lax_ratios.clear();
  for (std::size_t m = 0; m + 1 < res.size(); ++m) {
    c.note("residual at delta = " + std::to_string(deltas[m]), res[m]);
    lax_ratios.push_back(res[m] / res[m + 1]);
  }
  c.note("residual at delta = " + std::to_string(deltas.back()), res.back());
  const double order = std::log2(res.front() / res.back()) / static_cast<double>(res.size() - 1);
  c.above("observed order in delta", order, 1.9);
}

void criterion_7(Criterion& c) {
  const Grid grid = make_grid(128, 40.0, BoundaryKind::Periodic);
  const FlowTrajectory traj = evolve(analytic_soliton(grid, 4.0, 0.0, 0.0), 0.05, KdvParams{1e-4}, 50);
  const UnitaryFlow flow = evolve_unitary(traj);
  c.below("max ||U^H U - I||_F", flow.unitarity_defect, 1e-8);
  const std::size_t last = flow.s_values.size() - 1;
  c.below("conjugation residual at s = 0.05", conjugation_residual(flow, traj, last), 1e-3);

  // V = 0: U(s) = exp(-s A) with A = i(-4 D^3), i.e. exp(-4 s D^3).
  const FlowTrajectory zero = evolve(Field(grid), 0.05, KdvParams{1e-4}, 5);
  const UnitaryFlow free = evolve_unitary(zero);
  const Eigen::MatrixXd d3 = oracle::fourier_derivative(grid.n(), grid.length(), 3);
  double worst = 0.0;
  for (std::size_t j = 0; j < free.s_values.size(); ++j) {
    const Eigen::MatrixXd expected = (-4.0 * free.s_values[j] * d3).exp();
    worst = std::max(worst, (free.u[j].entries() - expected.cast<std::complex<double>>()).norm());
  }
  c.below("V = 0: max ||U(s) - exp(-4 s D^3)||_F", worst, 1e-8);

  const CanonicalPair qp = transformed_canonicals(flow, last);
  const auto& u = flow.u[last].entries();
  const ComplexMatrix q = position_operator(grid).entries();
  const ComplexMatrix p = momentum_operator(grid).entries();
  const ComplexMatrix qp0 = q * p - p * q;
  const ComplexMatrix qps = qp.q.entries() * qp.p.entries() - qp.p.entries() * qp.q.entries();
  c.below("||[q(s),p(s)] - U^H [q,p] U|| / ||[q,p]||", (qps - u.adjoint() * qp0 * u).norm() / qp0.norm(), 1e-9);
  c.note("||[q(s),p(s)] - [q,p]|| / ||[q,p]|| (finite matrices, diagnostic)", (qps - qp0).norm() / qp0.norm());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> e0(q, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((0.5 * (qp.q.entries() + qp.q.entries().adjoint())).eval(),
                                                  Eigen::EigenvaluesOnly);
  c.below("max |spec q(s) - spec q|", (e0.eigenvalues() - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);
}

void criterion_8(Criterion& c) {
  const Grid axis = make_grid(32, 16.0, BoundaryKind::Periodic);
  const TensorModel model = make_tensor_model(analytic_soliton(axis, 4.0, 0.0, 0.0), 0.05, KdvParams{1e-4}, 5);
  const Eigen::VectorXd ex = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(build_hamiltonian(model.vx).entries()).eigenvalues();
  double kron = 0.0;
  double drift = 0.0;
  double ground0 = 0.0;
  for (std::size_t j = 0; j < model.s_values.size(); ++j) {
    const Spectrum s2 = eigen(build_2d_hamiltonian(model, j));
    const Eigen::VectorXd ey =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(build_hamiltonian(model.vy_of_s.samples[j].field).entries())
            .eigenvalues();
    std::vector<double> sums;
    for (double a : ex) {
      for (double b : ey) sums.push_back(a + b);
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t l = 0; l < sums.size(); ++l) kron = std::max(kron, std::abs(s2.eigenvalues[l] - sums[l]));
    // Only bound-bound pair: the lowest 2D level.
    if (j == 0) ground0 = s2.eigenvalues[0];
    drift = std::max(drift, std::abs(s2.eigenvalues[0] - ground0));
  }
  c.below("2D spectrum vs pairwise 1D sums", kron, 1e-10);
  c.note("2D ground level (bound + bound)", ground0);
  c.below("bound-state sum drift across s", drift, 2e-3);
  const std::size_t last = model.s_values.size() - 1;
  c.below("|rotated potential at q1 = q2 = 0, s = 0 - (-4)|", std::abs(rotated_potential(model, 0, 0.0, 0.0) + 4.0), 1e-10);
  c.above("mixed-partial coupling witness, s = 0.05", coupling_witness(model, last, 3.0), 0.1);

  const Grid grid = make_grid(128, 40.0, BoundaryKind::Periodic);
  const FlowTrajectory traj = evolve(analytic_soliton(grid, 4.0, 0.0, 0.0), 0.05, KdvParams{1e-4}, 50);
  const UnitaryFlow flow = evolve_unitary(traj);
  c.equal("nonfactorizability witness at s = 0", nonfactorizability_witness(flow, 0), 0.0);
  c.above("nonfactorizability witness at s = 0.05", nonfactorizability_witness(flow, flow.s_values.size() - 1), 1e-3);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_9(Criterion& c) {
  using namespace isoflow::app;
  const std::vector<std::pair<Experiment, std::string>> configs{
      {Experiment::Soliton, R"({"grid": {"n": 256, "length": 40}, "flow": {"ds": 1e-3, "s_target": 0.5, "snapshots": 2},
           "initial": {"kind": "soliton", "lambda": 4, "q0": -1}})"},
      {Experiment::Evolve, R"({"grid": {"n": 128, "length": 40}, "flow": {"ds": 1e-3, "s_target": 0.2, "snapshots": 2},
           "initial": {"kind": "gaussian", "amplitude": 0.5}})"},
      {Experiment::Spectrum, R"({"grid": {"n": 384, "length": 60}, "flow": {"ds": 1e-4, "s_target": 0.2, "snapshots": 2},
           "initial": {"kind": "two-soliton", "solitons": [{"lambda": 4, "q0": -10}, {"lambda": 1, "q0": 0}]},
           "tolerances": {"isospectral": 2e-3}})"},
      {Experiment::Scatter, R"({"grid": {"n": 128, "length": 40}, "flow": {"ds": 1e-3, "s_target": 0.05, "snapshots": 2},
           "initial": {"kind": "gaussian", "amplitude": 0.5}, "scattering": {"k_count": 6}})"},
      {Experiment::LaxCheck, R"({"grid": {"n": 96, "length": 30}, "flow": {"ds": 1e-4, "s_target": 0.01, "snapshots": 4},
           "initial": {"kind": "soliton", "lambda": 4, "q0": 0}, "lax": {"delta": 1e-3, "order_deltas": [4e-3, 2e-3]},
           "tolerances": {"lax": 1, "lax_order": 0.1}})"},
      {Experiment::TensorDemo, R"({"grid": {"n": 96, "length": 30}, "flow": {"ds": 1e-4, "s_target": 0.01, "snapshots": 2},
           "initial": {"kind": "soliton", "lambda": 4, "q0": 0},
           "tensor": {"axis_n": 32, "axis_length": 16, "probe_half_width": 2, "lattice": 11}})"}};

  const fs::path root = fs::temp_directory_path() / ("isoflow-acceptance-" + std::to_string(::getpid()));
  std::size_t compared = 0;
  std::size_t mismatched = 0;
  for (const auto& [experiment, text] : configs) {
    ConfigResult parsed = parse_config(text);
    if (!parsed.ok()) {
      c.fail(std::string(to_string(experiment)) + ": " + parsed.errors.front().field + ": " +
             parsed.errors.front().message);
      continue;
    }
    RunConfig cfg = *parsed.config;
    cfg.output.svg = true;
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      cfg.output.directory = root / to_string(experiment) / std::to_string(run);
      const RunResult r = run_experiment(experiment, cfg);
      if (r.exit_code != kExitOk) {
        c.fail(std::string(to_string(experiment)) + " exited with " + std::to_string(r.exit_code) + " " + r.message);
      }
      dirs.push_back(cfg.output.directory);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const fs::path other = dirs[1] / entry.path().filename();
      ++compared;
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        ++mismatched;
        c.fail("differs between runs: " + entry.path().string());
      }
    }
  }
  fs::remove_all(root);
  c.note("experiments run twice", static_cast<double>(configs.size()));
  c.above("files compared", static_cast<double>(compared), 12.0);
  c.equal("files differing", static_cast<double>(mismatched), 0.0);
}

void criterion_10(Criterion& c) {
  const Grid grid = make_grid(256, 40.0, BoundaryKind::Periodic);
  const Field v0 = analytic_soliton(grid, 4.0, -5.0, 0.0);
  for (KdvScheme scheme : {KdvScheme::IntegratingFactorRK4, KdvScheme::ETDRK4}) {
    const Field ref = advance(v0, 0.5, KdvParams{6.25e-5, scheme});
    const double e1 = sup_diff(advance(v0, 0.5, KdvParams{1e-3, scheme}), ref);
    const double e2 = sup_diff(advance(v0, 0.5, KdvParams{5e-4, scheme}), ref);
    c.note(std::string(to_string(scheme)) + ": error at ds = 1e-3", e1);
    c.note(std::string(to_string(scheme)) + ": error at ds = 5e-4", e2);
    c.within(std::string(to_string(scheme)) + ": error ratio when ds halves (16 +- 20%)", e1 / e2, 12.8, 19.2);
  }
  if (lax_ratios.empty()) {
    c.fail("Lax residuals from criterion 6 unavailable");
    return;
  }
  for (std::size_t m = 0; m < lax_ratios.size(); ++m) {
    c.within("Lax residual ratio when delta halves (4 +- 20%), step " + std::to_string(m + 1), lax_ratios[m], 3.2, 4.8);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"soliton transport", criterion_1},
      {"isospectrality (one and two solitons)", criterion_2},
      {"KdV invariants", criterion_3},
      {"scattering invariance", criterion_4},
      {"b-phase law", criterion_5},
      {"Lax equation", criterion_6},
      {"unitary flow", criterion_7},
      {"tensor demo", criterion_8},
      {"determinism", criterion_9},
      {"convergence discipline", criterion_10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c(static_cast<int>(i + 1), criteria[i].first);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.fail(e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.finish(dt)) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
