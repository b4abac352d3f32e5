#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "survmult/metrics.hpp"
#include "survmult/rashomon.hpp"
#include "survmult/rng.hpp"

namespace {

using survmult::PerformanceScore;
using survmult::PredictionCube;
using survmult::Rng;

PredictionCube make_cube(std::size_t models, std::size_t obs) {
  Rng rng(models * 131 + obs);
  PredictionCube cube;
  cube.n_models = models;
  cube.n_obs = obs;
  cube.risks.resize(models * obs);
  for (double& r : cube.risks) {
    r = rng.uniform01();
  }
  for (std::size_t k = 0; k < models; ++k) {
    cube.performances.push_back(PerformanceScore::brier_at(rng.uniform01(), 250.0));
    cube.model_ids.push_back("m" + std::to_string(k));
  }
  cube.reference_index = survmult::select_reference(cube.performances);
  return cube;
}

void BM_Ambiguity(benchmark::State& state) {
  const auto cube = make_cube(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  const auto members =
      survmult::rashomon_set(cube.performances, cube.reference_index, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(survmult::ambiguity(cube, members, 0.05));
  }
}
BENCHMARK(BM_Ambiguity)->Args({100, 200})->Args({1000, 200})->Args({15000, 50});

void BM_Sweep(benchmark::State& state) {
  const auto cube = make_cube(static_cast<std::size_t>(state.range(0)), 200);
  std::vector<double> eps;
  std::vector<double> deltas;
  for (int i = 1; i <= 10; ++i) {
    eps.push_back(0.05 * i);
    deltas.push_back(0.05 * i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        survmult::sweep(cube, eps, deltas, "bench", state.range(1)));
  }
}
BENCHMARK(BM_Sweep)->Args({500, 1})->Args({500, 4})->Args({2000, 4});

}  // namespace

BENCHMARK_MAIN();
