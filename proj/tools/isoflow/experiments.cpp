#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "isoflow/errors.hpp"
#include "isoflow/kdv.hpp"
#include "isoflow/lax.hpp"
#include "isoflow/scattering.hpp"
#include "isoflow/schrodinger.hpp"
#include "isoflow/tensor.hpp"
#include "output.hpp"

#ifndef ISOFLOW_VERSION
#define ISOFLOW_VERSION "0.0.0"
#endif

namespace isoflow::app {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class Context {
 public:
  Context(Experiment e, const RunConfig& cfg) : experiment(e), cfg(cfg) {}

  Experiment experiment;
  const RunConfig& cfg;
  std::vector<Check> checks;
  std::vector<fs::path> files;
  ordered_json measurements = ordered_json::object();

  double tol(const std::string& name) const { return cfg.tolerances.at(name); }

  void at_most(const std::string& name, const std::string& invariant, double value,
               double tolerance) {
    checks.push_back({name, invariant, value, tolerance, "<=", value <= tolerance});
  }
  void at_least(const std::string& name, const std::string& invariant, double value,
                double tolerance) {
    checks.push_back({name, invariant, value, tolerance, ">=", value >= tolerance});
  }
  void exactly(const std::string& name, const std::string& invariant, double value,
               double expected) {
    checks.push_back({name, invariant, value, expected, "==", value == expected});
  }

  void csv(const std::string& name, const CsvTable& table) {
    if (!cfg.output.csv) return;
    table.write(cfg.output.directory / name);
    files.emplace_back(name);
  }
  void svg(const std::string& name, const PlotSpec& plot) {
    if (!cfg.output.svg) return;
    write_text(cfg.output.directory / name, render_svg(plot));
    files.emplace_back(name);
  }
};

Grid main_grid(const RunConfig& cfg) { return make_grid(cfg.grid.n, cfg.grid.length, cfg.grid.kind); }

KdvParams flow_params(const RunConfig& cfg) {
  return KdvParams{cfg.flow.ds, cfg.flow.scheme, cfg.flow.dealias};
}

std::string snapshot_name(const std::string& stem, std::size_t j, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03zu.", j);
  return stem + buf + ext;
}

ordered_json trajectory_json(const FlowTrajectory& traj) {
  return {{"ds_used", traj.params.ds},
          {"scheme", to_string(traj.params.scheme)},
          {"dealias", traj.params.dealias},
          {"s_values", traj.s_values()}};
}

// Profile tables (q, V[, V_exact]) and the u = -V plot for every snapshot.
void write_profiles(Context& ctx, const FlowTrajectory& traj,
                    const std::function<double(double, double)>& exact = {}) {
  const Grid& grid = traj.grid();
  PlotSpec plot{"u(q) = -V(q,s)", "q", "u = -V", {}};
  const std::size_t count = traj.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, (count + 7) / 8);
  for (std::size_t j = 0; j < count; ++j) {
    const auto& sample = traj.samples[j];
    std::vector<std::string> header{"q", "V"};
    if (exact) header.push_back("V_exact");
    CsvTable table(header);
    for (std::size_t i = 0; i < grid.n(); ++i) {
      std::vector<double> row{grid.point(i), sample.field[i]};
      if (exact) row.push_back(exact(sample.s, grid.point(i)));
      table.row(row);
    }
    ctx.csv(snapshot_name("profile", j, "csv"), table);
    if (j % stride == 0 || j + 1 == count) {
      Series s{"s = " + format_number(sample.s).substr(0, 8), {}, {}};
      for (std::size_t i = 0; i < grid.n(); ++i) {
        s.x.push_back(grid.point(i));
        s.y.push_back(-sample.field[i]);
      }
      plot.series.push_back(std::move(s));
    }
  }
  ctx.svg("profiles.svg", plot);
}

// Relative drift of the three functionals; absolute when the initial value is 0.
void invariant_checks(Context& ctx, const FlowTrajectory& traj) {
  CsvTable table({"s", "i1", "i2", "i3"});
  const KdvInvariants first = kdv_invariants(traj.samples.front().field);
  std::array<double, 3> drift{};
  const std::array<double, 3> base{first.i1, first.i2, first.i3};
  for (const auto& sample : traj.samples) {
    const KdvInvariants inv = kdv_invariants(sample.field);
    table.row({sample.s, inv.i1, inv.i2, inv.i3});
    const std::array<double, 3> now{inv.i1, inv.i2, inv.i3};
    for (std::size_t m = 0; m < 3; ++m) {
      const double scale = base[m] != 0.0 ? std::abs(base[m]) : 1.0;
      drift[m] = std::max(drift[m], std::abs(now[m] - base[m]) / scale);
    }
  }
  ctx.csv("invariants.csv", table);
  ctx.measurements["invariants_initial"] = {{"i1", first.i1}, {"i2", first.i2}, {"i3", first.i3}};
  const char* names[] = {"i1_drift", "i2_drift", "i3_drift"};
  for (std::size_t m = 0; m < 3; ++m) {
    ctx.at_most(names[m], "kdv_flow: conservation of kdv_invariants", drift[m],
                ctx.tol("invariants"));
  }
}

void run_soliton(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = main_grid(cfg);
  const SolitonParams p = cfg.initial.solitons.at(0);
  const Field v0 = soliton_potential(grid, p, 0.0);
  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);

  write_profiles(ctx, traj, [p](double s, double q) { return soliton_value(p, s, q); });
  double worst = 0.0;
  ordered_json centers = ordered_json::array();
  for (const auto& sample : traj.samples) {
    const Field exact = soliton_potential(grid, p, sample.s);
    worst = std::max(worst, norm_sup(sample.field - exact));
    const auto vals = sample.field.values();
    const auto it = std::min_element(vals.begin(), vals.end());
    const auto i = static_cast<std::size_t>(it - vals.begin());
    centers.push_back({{"s", sample.s},
                       {"argmin_q", grid.point(i)},
                       {"expected_center", p.q0 + p.lambda * sample.s},
                       {"min_V", *it}});
  }
  ctx.measurements["trajectory"] = trajectory_json(traj);
  ctx.measurements["centers"] = centers;
  ctx.measurements["bound_state"] = -p.lambda / 4.0;
  ctx.at_most("transport_sup_error", "kdv_flow: traveling-wave property", worst,
              ctx.tol("transport"));
  invariant_checks(ctx, traj);
}

void run_evolve(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = main_grid(cfg);
  const Field v0 = make_initial_field(cfg, grid);
  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);
  write_profiles(ctx, traj);
  ctx.measurements["trajectory"] = trajectory_json(traj);
  invariant_checks(ctx, traj);
}

void run_spectrum(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = main_grid(cfg);
  const Field v0 = make_initial_field(cfg, grid);
  const std::size_t bound = count_bound_states(v0);
  ctx.measurements["bound_states"] = bound;

  if (!grid.periodic()) {
    // Box grids: spectrum of the initial potential only.
    const OperatorMatrix h = build_hamiltonian(v0);
    const std::size_t levels = std::min<std::size_t>(std::max<std::size_t>(bound, 10), grid.n());
    const Spectrum sp = eigen(h, levels);
    CsvTable table({"s", "level", "eigenvalue"});
    for (std::size_t l = 0; l < sp.eigenvalues.size(); ++l) {
      table.row({0.0, static_cast<double>(l), sp.eigenvalues[l]});
    }
    ctx.csv("spectrum.csv", table);
    ctx.measurements["eigenvalues"] = sp.eigenvalues;
    ctx.measurements["eigen_residual"] = sp.residual;
    ctx.at_most("hermitian_defect", "schrodinger: OperatorMatrix self-adjointness",
                h.hermitian_defect(), kSelfAdjointTolerance);
    return;
  }

  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);
  write_profiles(ctx, traj);
  const std::size_t levels = std::max<std::size_t>(bound, 1);
  const IsospectralityReport rep = isospectrality_report(traj, levels, ctx.tol("isospectral"));
  CsvTable table({"s", "level", "eigenvalue"});
  for (std::size_t j = 0; j < rep.s_values.size(); ++j) {
    for (std::size_t l = 0; l < rep.eigenvalues[j].size(); ++l) {
      table.row({rep.s_values[j], static_cast<double>(l), rep.eigenvalues[j][l]});
    }
  }
  ctx.csv("spectrum.csv", table);
  ctx.measurements["trajectory"] = trajectory_json(traj);
  ctx.measurements["levels_tracked"] = levels;
  ctx.measurements["initial_eigenvalues"] = rep.eigenvalues.front();
  ctx.measurements["drift_per_level"] = rep.drift;
  ctx.at_most("isospectral_drift", "schrodinger: isospectrality along the KdV flow",
              rep.max_drift, ctx.tol("isospectral"));

  PlotSpec plot{"bound-state eigenvalues along the flow", "s", "E", {}};
  for (std::size_t l = 0; l < levels; ++l) {
    Series s{"level " + std::to_string(l), rep.s_values, {}};
    for (const auto& e : rep.eigenvalues) s.y.push_back(e[l]);
    plot.series.push_back(std::move(s));
  }
  ctx.svg("spectrum.svg", plot);
}

void run_scatter(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = main_grid(cfg);
  const Field v0 = make_initial_field(cfg, grid);
  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);
  const auto& sc = cfg.scattering;
  const std::vector<double> ks = log_spaced_wavenumbers(sc.k_min, sc.k_max, sc.k_count);
  const FlowScatteringReport rep =
      flow_scattering_report(traj, ks, std::nullopt, sc.fit_k_min, sc.fit_k_max);

  CsvTable coeffs({"k", "re_a", "im_a", "re_b", "im_b", "s"});
  double max_b = 0.0;
  for (std::size_t j = 0; j < rep.s_values.size(); ++j) {
    const ScatteringData& d = rep.per_snapshot[j];
    for (std::size_t i = 0; i < ks.size(); ++i) {
      coeffs.row({ks[i], d.a[i].real(), d.a[i].imag(), d.b[i].real(), d.b[i].imag(),
                  rep.s_values[j]});
      max_b = std::max(max_b, std::abs(d.b[i]));
    }
  }
  ctx.csv("scattering.csv", coeffs);

  CsvTable phase({"k", "s", "phase_shift"});
  CsvTable rates({"k", "phase_rate", "rate_over_k3", "line_fit_residual", "valid"});
  PlotSpec plot{"arg b(k,s) - arg b(k,0)", "s", "phase shift", {}};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const bool valid = rep.phase_valid[i];
    rates.row({ks[i], rep.phase_rate[i], rep.phase_rate[i] / (ks[i] * ks[i] * ks[i]),
               rep.phase_fit_residual[i], valid ? 1.0 : 0.0});
    if (!valid) continue;
    for (std::size_t j = 0; j < rep.s_values.size(); ++j) {
      phase.row({ks[i], rep.s_values[j], rep.phase_shift[i][j]});
    }
    if (i % 4 == 0) {
      plot.series.push_back({"k = " + format_number(ks[i]).substr(0, 6), rep.s_values,
                             rep.phase_shift[i]});
    }
  }
  ctx.csv("phase.csv", phase);
  ctx.csv("phase_rate.csv", rates);
  ctx.svg("phase.svg", plot);
  write_profiles(ctx, traj);

  ctx.measurements["trajectory"] = trajectory_json(traj);
  ctx.measurements["convention"] = kScatteringConvention;
  ctx.measurements["window"] = {rep.window.left, rep.window.right};
  ctx.measurements["cubic_coefficient"] = rep.cubic_coefficient;
  ctx.measurements["cubic_fit_points"] = rep.cubic_fit_points;
  ctx.measurements["max_abs_b"] = max_b;

  const double a_drift = *std::max_element(rep.a_drift.begin(), rep.a_drift.end());
  const double b_drift = *std::max_element(rep.b_modulus_drift.begin(), rep.b_modulus_drift.end());
  ctx.at_most("a_drift", "scattering: a(k,s) invariance", a_drift, ctx.tol("scattering"));
  ctx.at_most("b_modulus_drift", "scattering: |b(k,s)| invariance", b_drift,
              ctx.tol("scattering"));
  ctx.at_most("wronskian_defect", "scattering: Wronskian identity", rep.max_wronskian_defect,
              ctx.tol("wronskian"));
  if (rep.cubic_fit_points >= 3) {
    ctx.at_most("cubic_fit_residual", "scattering: phase rate proportional to k^3",
                rep.cubic_fit_residual, ctx.tol("cubic_fit"));
  }
  if (cfg.initial.kind == InitialKind::Soliton) {
    ctx.at_most("reflectionless_max_b", "scattering: reflectionless invariance", max_b,
                ctx.tol("reflectionless"));
  }
}

double unitarity(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

void run_lax_check(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = main_grid(cfg);
  const Field v0 = make_initial_field(cfg, grid);
  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);
  const std::size_t j = cfg.lax.snapshot.value_or(cfg.flow.snapshots / 2);

  const LaxPair pair = build_lax_pair(traj.samples[j].field);
  const LaxResidual headline = lax_residual(traj, j, cfg.lax.delta);
  std::vector<double> deltas = cfg.lax.order_deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  CsvTable lax({"delta", "residual", "unpadded_residual"});
  std::vector<double> residuals;
  for (double d : deltas) {
    const LaxResidual r = lax_residual(traj, j, d);
    residuals.push_back(r.value);
    lax.row({d, r.value, r.unpadded_value});
  }
  lax.row({cfg.lax.delta, headline.value, headline.unpadded_value});
  ctx.csv("lax.csv", lax);
  std::vector<double> ratios;
  for (std::size_t m = 1; m < residuals.size(); ++m) {
    ratios.push_back(residuals[m] > 0.0 ? residuals[m - 1] / residuals[m] : 0.0);
  }

  const UnitaryFlow flow = evolve_unitary(traj, cfg.lax.substeps);
  CsvTable uni({"s", "unitarity_defect", "conjugation_residual"});
  double worst_conj = 0.0;
  double worst_unit = 0.0;
  for (std::size_t m = 0; m < flow.s_values.size(); ++m) {
    const double c = conjugation_residual(flow, traj, m);
    const double u = unitarity(flow.u[m].entries());
    worst_conj = std::max(worst_conj, c);
    worst_unit = std::max(worst_unit, u);
    uni.row({flow.s_values[m], u, c});
  }
  ctx.csv("unitary.csv", uni);

  const std::size_t last = flow.s_values.size() - 1;
  const CanonicalPair qp = transformed_canonicals(flow, last);
  const ComplexMatrix& u = flow.u[last].entries();
  const ComplexMatrix q = position_operator(grid).entries();
  const ComplexMatrix p = momentum_operator(grid).entries();
  const ComplexMatrix qp0 = commutator(q, p);
  const ComplexMatrix qps = commutator(qp.q.entries(), qp.p.entries());
  const double covariance = (qps - u.adjoint() * qp0 * u).norm() / qp0.norm();
  const double literal = (qps - qp0).norm() / qp0.norm();
  const Spectrum sq = eigen(position_operator(grid));
  const Spectrum sqs = eigen(OperatorMatrix((0.5 * (qp.q.entries() + qp.q.entries().adjoint())).eval(), grid));
  double spec_gap = 0.0;
  for (std::size_t i = 0; i < sq.eigenvalues.size(); ++i) {
    spec_gap = std::max(spec_gap, std::abs(sq.eigenvalues[i] - sqs.eigenvalues[i]));
  }

  ctx.measurements["trajectory"] = trajectory_json(traj);
  ctx.measurements["lax"] = {{"snapshot", j},
                             {"s", traj.samples[j].s},
                             {"norm", headline.norm},
                             {"a_asymmetry", pair.asymmetry},
                             {"a_norm", pair.a.frobenius_norm()},
                             {"deltas", deltas},
                             {"residuals", residuals},
                             {"halving_ratios", ratios},
                             {"unpadded_residual", headline.unpadded_value}};
  ctx.measurements["unitary"] = {{"substeps", cfg.lax.substeps},
                                 {"max_conjugation_residual", worst_conj},
                                 {"canonical_commutator_literal_defect", literal}};

  ctx.at_most("lax_residual", "lax_verification: Lax equation", headline.value, ctx.tol("lax"));
  if (!ratios.empty()) {
    ctx.at_least("lax_halving_ratio_min", "lax_verification: order-2 convergence in delta",
                 *std::min_element(ratios.begin(), ratios.end()), ctx.tol("lax_order"));
  }
  ctx.at_most("a_asymmetry", "lax_verification: LaxPair self-adjointness", pair.asymmetry,
              1e-10);
  ctx.at_most("unitarity_defect", "lax_verification: UnitaryFlow unitarity", worst_unit,
              ctx.tol("unitarity"));
  ctx.at_most("conjugation_residual", "lax_verification: h(s) = U h(0) U^H", worst_conj,
              ctx.tol("conjugation"));
  ctx.at_most("canonical_commutator_covariance",
              "lax_verification: commutators preserved by conjugation", covariance,
              ctx.tol("canonical"));
  ctx.at_most("canonical_position_spectrum", "lax_verification: spectrum of q(s) equals q",
              spec_gap, ctx.tol("canonical"));
}

void run_tensor_demo(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto& tc = cfg.tensor;
  const Grid axis = make_grid(tc.axis_n, tc.axis_length.value_or(cfg.grid.length),
                              BoundaryKind::Periodic);
  const Field v_axis = make_initial_field(cfg, axis);
  const TensorModel model =
      make_tensor_model(v_axis, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);

  // 1D bound states at s = 0 and their pairwise sums.
  const Spectrum sx = eigen(build_hamiltonian(model.vx));
  std::vector<double> bound;
  for (double e : sx.eigenvalues) {
    if (e < 0.0) bound.push_back(e);
  }
  std::vector<double> pair_sums;
  for (double a : bound) {
    for (double b : bound) pair_sums.push_back(a + b);
  }

  CsvTable spec({"s", "level", "eigenvalue_2d", "pair_sum"});
  double kron = 0.0;
  double drift = 0.0;
  std::vector<double> bound_at_zero;
  // Dense 2D solves on at most 11 evenly spaced snapshots, both ends included.
  const std::size_t last_axis = model.s_values.size() - 1;
  const std::size_t stride = std::max<std::size_t>(1, (last_axis + 9) / 10);
  std::vector<std::size_t> probes;
  for (std::size_t j = 0; j < last_axis; j += stride) probes.push_back(j);
  probes.push_back(last_axis);
  for (std::size_t j : probes) {
    const Spectrum s2 = eigen(build_2d_hamiltonian(model, j));
    const Spectrum sy = eigen(build_hamiltonian(model.vy_of_s.samples[j].field));
    std::vector<double> sums;
    sums.reserve(s2.eigenvalues.size());
    for (double a : sx.eigenvalues) {
      for (double b : sy.eigenvalues) sums.push_back(a + b);
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t l = 0; l < sums.size(); ++l) {
      kron = std::max(kron, std::abs(s2.eigenvalues[l] - sums[l]));
    }
    const std::size_t shown = std::min<std::size_t>(sums.size(), 16);
    for (std::size_t l = 0; l < shown; ++l) {
      spec.row({model.s_values[j], static_cast<double>(l), s2.eigenvalues[l], sums[l]});
    }
    // Nearest 2D eigenvalue to each bound-state pair sum.
    std::vector<double> tracked;
    for (double target : pair_sums) {
      double best = s2.eigenvalues.front();
      for (double e : s2.eigenvalues) {
        if (std::abs(e - target) < std::abs(best - target)) best = e;
      }
      tracked.push_back(best);
    }
    if (j == 0) bound_at_zero = tracked;
    for (std::size_t m = 0; m < tracked.size(); ++m) {
      drift = std::max(drift, std::abs(tracked[m] - bound_at_zero[m]));
    }
  }
  ctx.csv("tensor_spectrum.csv", spec);

  // Unitary flow on the main grid for the witness.
  const Grid grid = main_grid(cfg);
  const Field v0 = make_initial_field(cfg, grid);
  const FlowTrajectory traj = evolve(v0, cfg.flow.s_target, flow_params(cfg), cfg.flow.snapshots);
  const UnitaryFlow flow = evolve_unitary(traj, cfg.lax.substeps);

  CsvTable wit({"s", "nonfactorizability", "coupling"});
  std::vector<double> witness;
  std::vector<double> coupling;
  const std::size_t steps = std::min(flow.s_values.size(), model.s_values.size());
  for (std::size_t j = 0; j < steps; ++j) {
    witness.push_back(nonfactorizability_witness(flow, j));
    coupling.push_back(
        coupling_witness(model, j, tc.probe_half_width, tc.lattice, tc.probe_step));
    wit.row({flow.s_values[j], witness.back(), coupling.back()});
  }
  ctx.csv("witness.csv", wit);

  const std::size_t last = steps - 1;
  CsvTable rot({"q1", "q2", "V"});
  for (std::size_t a = 0; a < tc.lattice; ++a) {
    const double q1 = -tc.probe_half_width +
                      2.0 * tc.probe_half_width * static_cast<double>(a) /
                          static_cast<double>(tc.lattice - 1);
    for (std::size_t b = 0; b < tc.lattice; ++b) {
      const double q2 = -tc.probe_half_width +
                        2.0 * tc.probe_half_width * static_cast<double>(b) /
                            static_cast<double>(tc.lattice - 1);
      rot.row({q1, q2, rotated_potential(model, last, q1, q2)});
    }
  }
  ctx.csv("rotated_potential.csv", rot);

  PlotSpec plot{"nonfactorizability witness", "s", "||[q_y(s), q_y]|| / ||q_y||^2", {}};
  plot.series.push_back({"witness", std::vector<double>(flow.s_values.begin(),
                                                        flow.s_values.begin() + steps),
                         witness});
  ctx.svg("witness.svg", plot);

  ctx.measurements["axis_grid"] = {{"n", axis.n()}, {"length", axis.length()}};
  ctx.measurements["bound_states_1d"] = bound;
  ctx.measurements["bound_pair_sums_2d"] = bound_at_zero;
  ctx.measurements["witness"] = witness;
  ctx.measurements["coupling"] = coupling;
  ctx.measurements["witness_reduction"] =
      "[q_1s, q_20] = -1/2 I (x) [q_y(s), q_y]; a nonzero 1D commutator means q_1s is not a "
      "function of (q_10, p_10)";

  ctx.at_most("kronecker_sum_spectrum", "tensor_demo: Kronecker-sum spectral identity", kron,
              ctx.tol("kronecker"));
  ctx.at_most("bound_pair_sum_drift", "tensor_demo: s-independent 2D bound states", drift,
              ctx.tol("tensor_isospectral"));
  ctx.at_least("coupling_witness", "tensor_demo: rotated potential does not separate",
               coupling[last], ctx.tol("coupling"));
  ctx.exactly("witness_at_zero", "tensor_demo: witness vanishes at s = 0", witness.front(), 0.0);
  ctx.at_least("witness_final", "tensor_demo: witness positive for s > 0", witness[last],
               ctx.tol("witness"));
  if (steps > 1) {
    ctx.at_least("witness_min_positive_s", "tensor_demo: witness positive for s > 0",
                 *std::min_element(witness.begin() + 1, witness.end()),
                 std::numeric_limits<double>::min());
  }
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json initial = {{"kind", to_string(cfg.initial.kind)}};
  switch (cfg.initial.kind) {
    case InitialKind::Soliton:
    case InitialKind::TwoSoliton: {
      ordered_json list = ordered_json::array();
      for (const auto& p : cfg.initial.solitons) list.push_back({{"lambda", p.lambda}, {"q0", p.q0}});
      initial["solitons"] = list;
      break;
    }
    case InitialKind::Gaussian:
      initial["amplitude"] = cfg.initial.amplitude;
      initial["width"] = cfg.initial.width;
      initial["center"] = cfg.initial.center;
      break;
    case InitialKind::File:
      initial["path"] = cfg.initial.path.generic_string();
      break;
    case InitialKind::Zero:
      break;
  }
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  return {{"grid",
           {{"n", cfg.grid.n}, {"length", cfg.grid.length}, {"kind", to_string(cfg.grid.kind)}}},
          {"flow",
           {{"ds", cfg.flow.ds},
            {"s_target", cfg.flow.s_target},
            {"snapshots", cfg.flow.snapshots},
            {"scheme", to_string(cfg.flow.scheme)},
            {"dealias", cfg.flow.dealias}}},
          {"initial", initial},
          {"scattering",
           {{"k_min", cfg.scattering.k_min},
            {"k_max", cfg.scattering.k_max},
            {"k_count", cfg.scattering.k_count},
            {"fit_k_min", cfg.scattering.fit_k_min},
            {"fit_k_max", cfg.scattering.fit_k_max}}},
          {"lax",
           {{"delta", cfg.lax.delta},
            {"snapshot", cfg.lax.snapshot ? ordered_json(*cfg.lax.snapshot) : ordered_json()},
            {"order_deltas", cfg.lax.order_deltas},
            {"substeps", cfg.lax.substeps}}},
          {"tensor",
           {{"axis_n", cfg.tensor.axis_n},
            {"axis_length", cfg.tensor.axis_length.value_or(cfg.grid.length)},
            {"probe_half_width", cfg.tensor.probe_half_width},
            {"lattice", cfg.tensor.lattice},
            {"probe_step", cfg.tensor.probe_step}}},
          {"tolerances", tol}};
}

void write_report(const Context& ctx, RunResult& result) {
  if (!ctx.cfg.output.json) return;
  ordered_json checks = ordered_json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name},
                      {"invariant", c.invariant},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  ordered_json files = ordered_json::array();
  for (const auto& f : result.files) files.push_back(f.generic_string());
  files.push_back("report.json");
  ordered_json report = {
      {"tool", "isoflow"},
      {"version", ISOFLOW_VERSION},
      {"experiment", to_string(ctx.experiment)},
      {"status", result.status},
      {"exit_code", result.exit_code},
      {"message", result.message},
      {"conventions",
       {{"units", "hbar = 1, 2m = 1; h = -d^2/dq^2 + V(q,s)"},
        {"flow", "dV/ds = -V_qqq + 6 V V_q"},
        {"scattering", kScatteringConvention},
        {"residual_norm", "frobenius"}}},
      {"seed", nullptr},
      {"config", config_json(ctx.cfg)},
      {"checks", checks},
      {"measurements", ctx.measurements},
      {"files", files}};
  write_text(ctx.cfg.output.directory / "report.json", report.dump(2) + "\n");
  result.files.emplace_back("report.json");
}

}  // namespace

RunResult run_experiment(Experiment experiment, const RunConfig& cfg) {
  RunResult result;
  const auto problems = check_preconditions(cfg, experiment);
  if (!problems.empty()) {
    result.exit_code = kExitConfig;
    result.status = "config error";
    for (const auto& d : problems) {
      result.message += (result.message.empty() ? "" : "; ") + d.field + ": " + d.message;
    }
    return result;
  }
  std::error_code ec;
  fs::create_directories(cfg.output.directory, ec);
  if (ec || !fs::is_directory(cfg.output.directory)) {
    result.exit_code = kExitConfig;
    result.status = "config error";
    result.message = "output.directory: cannot create " + cfg.output.directory.string();
    return result;
  }

  Context ctx(experiment, cfg);
  try {
    switch (experiment) {
      case Experiment::Soliton: run_soliton(ctx); break;
      case Experiment::Evolve: run_evolve(ctx); break;
      case Experiment::Spectrum: run_spectrum(ctx); break;
      case Experiment::Scatter: run_scatter(ctx); break;
      case Experiment::LaxCheck: run_lax_check(ctx); break;
      case Experiment::TensorDemo: run_tensor_demo(ctx); break;
    }
    const bool all_pass =
        std::all_of(ctx.checks.begin(), ctx.checks.end(), [](const Check& c) { return c.pass; });
    result.exit_code = all_pass ? kExitOk : kExitInvariant;
    result.status = all_pass ? "ok" : "invariant failure";
  } catch (const PreconditionError& e) {
    result.exit_code = kExitConfig;
    result.status = "config error";
    result.message = e.what();
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumerical;
    result.status = "numerical failure";
    result.message = e.what();
  } catch (const std::runtime_error& e) {
    // Output files that cannot be written.
    result.exit_code = kExitConfig;
    result.status = "config error";
    result.message = e.what();
  }
  result.checks = ctx.checks;
  result.files = ctx.files;
  try {
    write_report(ctx, result);
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.status = "config error";
    result.message = e.what();
  }
  return result;
}

}  // namespace isoflow::app
