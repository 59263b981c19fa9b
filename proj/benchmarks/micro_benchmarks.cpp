#include <benchmark/benchmark.h>

#include "kkle/dv_objective.hpp"
#include "kkle/estimator.hpp"
#include "kkle/kernel.hpp"
#include "kkle/mine.hpp"
#include "kkle/optimizer.hpp"
#include "kkle/synthetic.hpp"

namespace {

using namespace kkle;

void BM_BuildGram(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto x = sample_gaussian(n, 2, 0.0, 1.0, 1), y = sample_gaussian(n, 2, 0.5, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_gram(x, y, {1.0}).entries.data());
  state.SetComplexityN(n);
}
BENCHMARK(BM_BuildGram)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_FeatureMap(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const auto x = sample_gaussian(10000, 2, 0.0, 1.0, 3);
  const auto fm = sample_feature_map(2, d, {1.0}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(apply_feature_map_float(fm, x).data());
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_FeatureMap)->Arg(256)->Arg(1024)->Arg(2048);

void BM_PrimalStep(benchmark::State& state) {
  const auto fm = sample_feature_map(2, 1024, {1.0}, 5);
  const auto phi_x = apply_feature_map_float(fm, sample_gaussian(20000, 2, 0.0, 1.0, 6));
  const auto phi_y = apply_feature_map_float(fm, sample_gaussian(20000, 2, 0.5, 1.0, 7));
  OptimizerConfig cfg;
  cfg.max_iter = 100;
  cfg.gamma = 0.0;
  cfg.batch_size = static_cast<Index>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_primal(phi_x, phi_y, cfg).trace.final_estimate);
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_PrimalStep)->Arg(512)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_DualStep(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto k = build_gram(sample_gaussian(n, 1, 0.0, 1.0, 8), sample_gaussian(n, 1, 1.0, 1.0, 9), {1.0});
  OptimizerConfig cfg;
  cfg.max_iter = 50;
  cfg.gamma = 0.0;
  cfg.batch_size = n;
  for (auto _ : state) benchmark::DoNotOptimize(run_dual(k, cfg).trace.final_estimate);
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_DualStep)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MineGradient(benchmark::State& state) {
  const auto p = MlpParams::random(2, 64, 10);
  const auto x = sample_gaussian(512, 2, 0.0, 1.0, 11), y = sample_gaussian(512, 2, 0.0, 1.0, 12);
  for (auto _ : state) benchmark::DoNotOptimize(mine_loss_gradient(p, x, y).b_out);
}
BENCHMARK(BM_MineGradient);

void BM_EstimateMi(benchmark::State& state) {
  const auto pairs = sample_gaussian_pairs({1, 0.5, static_cast<Index>(state.range(0)), 13});
  EstimatorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mi(pairs, {{0}, {1}}, cfg).kl_estimate);
}
BENCHMARK(BM_EstimateMi)->Arg(10000)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
