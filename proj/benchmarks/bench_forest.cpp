#include <benchmark/benchmark.h>

#include <vector>

#include "survmult/forest.hpp"
#include "survmult/rng.hpp"

namespace {

using survmult::HyperParams;
using survmult::Rng;
using survmult::SplitRule;
using survmult::SurvivalDataset;

SurvivalDataset make_dataset(std::size_t n, std::size_t d) {
  Rng rng(n * 31 + d);
  std::vector<double> features(n * d);
  std::vector<double> times(n);
  std::vector<std::uint8_t> events(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      features[i * d + c] = rng.uniform01();
    }
    times[i] = std::floor(2.0 + 200.0 * features[i * d] + 50.0 * rng.uniform01());
    events[i] = rng.uniform01() < 0.3 ? 0 : 1;
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < d; ++c) {
    names.push_back("x" + std::to_string(c));
  }
  return SurvivalDataset(std::move(features), d, std::move(times), std::move(events),
                         std::move(names));
}

void BM_FitForest(benchmark::State& state) {
  const auto data = make_dataset(static_cast<std::size_t>(state.range(0)), 24);
  HyperParams hp{static_cast<std::size_t>(state.range(1)), 5, 5, 5,
                 SplitRule::kLogRank, 5};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(survmult::fit_forest(data, hp, ++seed));
  }
}
BENCHMARK(BM_FitForest)->Args({80, 25})->Args({80, 100})->Args({500, 25});

void BM_FitForestLogRankScore(benchmark::State& state) {
  const auto data = make_dataset(80, 24);
  HyperParams hp{25, 5, 5, 5, SplitRule::kLogRankScore, 5};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(survmult::fit_forest(data, hp, ++seed));
  }
}
BENCHMARK(BM_FitForestLogRankScore);

void BM_PredictChf(benchmark::State& state) {
  const auto data = make_dataset(200, 24);
  HyperParams hp{static_cast<std::size_t>(state.range(0)), 5, 5, 5,
                 SplitRule::kLogRank, 5};
  const auto forest = survmult::fit_forest(data, hp, 1);
  const auto probe = make_dataset(1, 24);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest.predict_chf(probe.row(0)));
  }
}
BENCHMARK(BM_PredictChf)->Arg(25)->Arg(100)->Arg(400);

}  // namespace
