#include <benchmark/benchmark.h>

#include <vector>

#include "survmult/estimators.hpp"
#include "survmult/rng.hpp"

namespace {

using survmult::Rng;

void make_inputs(std::size_t n, std::vector<double>& times,
                 std::vector<std::uint8_t>& events) {
  Rng rng(n);
  times.resize(n);
  events.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = 1.0 + std::floor(rng.uniform01() * 500.0);
    events[i] = rng.uniform01() < 0.3 ? 0 : 1;
  }
}

void BM_KaplanMeier(benchmark::State& state) {
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  make_inputs(static_cast<std::size_t>(state.range(0)), times, events);
  for (auto _ : state) {
    benchmark::DoNotOptimize(survmult::km_estimate(times, events));
  }
}
BENCHMARK(BM_KaplanMeier)->Arg(100)->Arg(1000)->Arg(10000);

void BM_NelsonAalen(benchmark::State& state) {
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  make_inputs(static_cast<std::size_t>(state.range(0)), times, events);
  for (auto _ : state) {
    benchmark::DoNotOptimize(survmult::na_cumhaz(times, events));
  }
}
BENCHMARK(BM_NelsonAalen)->Arg(100)->Arg(1000)->Arg(10000);

void BM_StepFunctionEval(benchmark::State& state) {
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  make_inputs(10000, times, events);
  const auto chf = survmult::na_cumhaz(times, events);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.37;
    if (t > 500.0) {
      t = 0.0;
    }
    benchmark::DoNotOptimize(chf(t));
  }
}
BENCHMARK(BM_StepFunctionEval);

}  // namespace
