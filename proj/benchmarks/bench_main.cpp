#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "limset/grid_fn.hpp"
#include "limset/moment_model.hpp"
#include "limset/normalizer.hpp"
#include "limset/rng_stream.hpp"
#include "limset/series.hpp"
#include "limset/simulate.hpp"
#include "limset/sym_matrix.hpp"
#include "limset/taut_string.hpp"

namespace {

limset::GridFn random_walk(int n_grid, std::uint64_t seed) {
  limset::RngStream rng(seed, 0);
  limset::GridFn f(1, n_grid);
  double step = 1.0 / std::sqrt(static_cast<double>(n_grid));
  double acc = 0.0;
  for (int i = 1; i <= n_grid; ++i) {
    acc += step * rng.next_normal();
    f.at(i, 0) = acc;
  }
  return f;
}

void BM_TautString(benchmark::State& state) {
  const int n_grid = static_cast<int>(state.range(0));
  limset::GridFn g = random_walk(n_grid, 42);
  for (auto _ : state)
    benchmark::DoNotOptimize(limset::taut_string(g, 0.3).energy);
  state.SetComplexityN(n_grid);
}
BENCHMARK(BM_TautString)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_MinEnergyInBall(benchmark::State& state) {
  limset::GridFn g = random_walk(256, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(limset::min_energy_in_ball(g, 0.5));
}
BENCHMARK(BM_MinEnergyInBall);

void BM_SeriesClassifier(benchmark::State& state) {
  for (auto _ : state) {
    auto verdict = limset::series_classify([](double ln_n) {
      return ln_n > 1.0 ? 0.8 * std::log(ln_n) : 0.0;
    });
    benchmark::DoNotOptimize(verdict);
  }
}
BENCHMARK(BM_SeriesClassifier);

void BM_PartialSums(benchmark::State& state) {
  const long long n_max = state.range(0);
  limset::GaussianModel model(limset::SymMatrix::identity(2));
  auto seq = limset::NormalizerSeq::sqrt_2n_loglog();
  std::uint64_t stream = 0;
  for (auto _ : state) {
    limset::RngStream rng(1234, stream++);
    auto points = limset::simulate_partial_sums(model, seq, n_max, rng);
    benchmark::DoNotOptimize(points.data());
  }
  state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_PartialSums)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_ClusterPipeline(benchmark::State& state) {
  limset::GaussianModel model(limset::SymMatrix::identity(2));
  auto seq = limset::NormalizerSeq::sqrt_2n_loglog();
  limset::ClusterConfig cfg;
  cfg.streams = 4;
  cfg.snapshot_count = 2;
  for (auto _ : state) {
    auto report = limset::run_cluster(model, seq, state.range(0), 99, cfg);
    benchmark::DoNotOptimize(report.net.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.streams);
}
BENCHMARK(BM_ClusterPipeline)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
