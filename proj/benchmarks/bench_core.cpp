#include "icf/conformal.hpp"
#include "icf/flow.hpp"
#include "icf/invariants.hpp"
#include "icf/soliton.hpp"
#include "icf/surfaces.hpp"

#include <benchmark/benchmark.h>

namespace {

icf::StarShapedHypersurface surface(int nt) {
  return icf::make_harmonic(icf::SphereGrid::make({nt, 2 * nt}), 1.0, {{2, 2, 0.1}, {3, -1, 0.03}});
}

void BM_Geometry(benchmark::State& state) {
  const auto s = surface(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(icf::geometry(s));
}
BENCHMARK(BM_Geometry)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FlowStep(benchmark::State& state) {
  const auto s = surface(static_cast<int>(state.range(0)));
  const auto speed = icf::SpeedFunction::mean_curvature();
  icf::StepOptions opts;
  opts.rescale = true;
  for (auto _ : state) benchmark::DoNotOptimize(icf::step(s, speed, 1e-3, opts));
}
BENCHMARK(BM_FlowStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Pushforward(benchmark::State& state) {
  const auto s = surface(static_cast<int>(state.range(0)));
  icf::ConformalKillingField V;
  V.v = {0.1, -0.05, 0.02};
  V.S_lower = {0.2, 0.0, -0.1};
  V.mu = 0.3;
  V.b = {0.02, 0.01, -0.03};
  for (auto _ : state) benchmark::DoNotOptimize(icf::pushforward_surface(V, 0.1, s));
}
BENCHMARK(BM_Pushforward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BestFit(benchmark::State& state) {
  const auto s = surface(static_cast<int>(state.range(0)));
  const auto speed = icf::SpeedFunction::mean_curvature();
  for (auto _ : state) benchmark::DoNotOptimize(icf::best_fit_ckf(s, speed));
}
BENCHMARK(BM_BestFit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EnergyReport(benchmark::State& state) {
  const auto s = surface(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(icf::energy_report(s, icf::default_a_values()));
}
BENCHMARK(BM_EnergyReport)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
