#include <benchmark/benchmark.h>

#include <vector>

#include "isoflow/kdv.hpp"
#include "isoflow/lax.hpp"
#include "isoflow/scattering.hpp"
#include "isoflow/schrodinger.hpp"

using namespace isoflow;

namespace {

Field soliton_on(std::size_t n, double length) {
  return soliton_potential(make_grid(n, length, BoundaryKind::Periodic), {4.0, 0.0}, 0.0);
}

void BM_KdvAdvance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Field v = soliton_on(n, 60.0);
  const KdvParams p{1e-4, state.range(1) == 0 ? KdvScheme::IntegratingFactorRK4 : KdvScheme::ETDRK4};
  for (auto _ : state) benchmark::DoNotOptimize(advance(v, 1e-2, p));  // 100 steps
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_KdvAdvance)->ArgsProduct({{256, 512, 768}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_LowestEigenvalues(benchmark::State& state) {
  const Field v = soliton_on(static_cast<std::size_t>(state.range(0)), 60.0);
  const OperatorMatrix h = build_hamiltonian(v);
  for (auto _ : state) benchmark::DoNotOptimize(eigen(h, 4));
}
BENCHMARK(BM_LowestEigenvalues)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Scattering(benchmark::State& state) {
  const Field v = soliton_on(512, 60.0);
  const auto k = log_spaced_wavenumbers(0.25, 4.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scattering_coefficients(v, k));
}
BENCHMARK(BM_Scattering)->Arg(1)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_UnitaryStep(benchmark::State& state) {
  const Field v = soliton_on(static_cast<std::size_t>(state.range(0)), 40.0);
  const auto traj = evolve(v, 1e-3, KdvParams{1e-4}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_unitary(traj));
}
BENCHMARK(BM_UnitaryStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
