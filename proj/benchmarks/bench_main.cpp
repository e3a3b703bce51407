#include <benchmark/benchmark.h>

#include "faultflow/pipeline.hpp"

using namespace faultflow;

namespace {

const CaseArtifacts& artifacts() {
  static const auto a = [] {
    ArtifactOptions o;
    o.n_ref = 2000;
    o.n_troll = 2000;
    return build_artifacts(1e-4, o);
  }();
  return a;
}

void BM_Upscale(benchmark::State& state) {
  FaciesModelConfig cfg;
  const auto grid = SdGrid::log_spaced();
  Rng rng(1);
  const auto r = sample_realization(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(upscale_flow_functions(r, grid, cfg));
}
BENCHMARK(BM_Upscale);

void BM_Ensemble(benchmark::State& state) {
  FaciesModelConfig cfg;
  const auto grid = SdGrid::log_spaced();
  for (auto _ : state) benchmark::DoNotOptimize(generate_ensemble(cfg, grid, state.range(0), 7));
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_VineSample(benchmark::State& state) {
  const auto& a = artifacts();
  std::vector<double> u{0.3, 0.6, 0.2, 0.8, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(a.vine.sample_y(u));
}
BENCHMARK(BM_VineSample);

void BM_EvaluateFlowFunctions(benchmark::State& state) {
  const auto& a = artifacts();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_flow_functions(a.reduced.y_ref[11], a.reduced));
}
BENCHMARK(BM_EvaluateFlowFunctions);

void BM_Simulate(benchmark::State& state) {
  const CaseModel model(1, artifacts());
  const std::vector<double> u{0.5};
  for (auto _ : state) benchmark::DoNotOptimize(model.leakage(u));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_AdssCorner(benchmark::State& state) {
  const Integrand f = [](std::span<const double> u) { return (u[0] < 0.25 && u[1] < 0.25) ? 1.0 : 0.0; };
  for (auto _ : state) benchmark::DoNotOptimize(run_adaptive(f, 2, 2000, {}, 3).estimate);
}
BENCHMARK(BM_AdssCorner)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
