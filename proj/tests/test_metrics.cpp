#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "survmult/errors.hpp"
#include "survmult/metrics.hpp"
#include "survmult/step_function.hpp"
#include "support/oracles.hpp"

using survmult::brier_score;
using survmult::c_index;
using survmult::integrated_brier;
using survmult::MetricKind;
using survmult::Orientation;
using survmult::PerformanceScore;
using survmult::Rng;
using survmult::ScoringError;
using survmult::StepFunction;
using survmult::SurvivalDataset;

namespace {

SurvivalDataset make_test(std::vector<double> times, std::vector<std::uint8_t> events) {
  const std::size_t n = times.size();
  return SurvivalDataset(std::vector<double>(n, 0.0), 1, std::move(times),
                         std::move(events), {"x0"});
}

const StepFunction kNoCensoring = StepFunction::constant(1.0);

}  // namespace

TEST_CASE("performance score factories pin orientation and range") {
  const auto brier = PerformanceScore::brier_at(0.2, 250.0);
  CHECK(brier.orientation == Orientation::kLowerIsBetter);
  CHECK(brier.kind == MetricKind::kBrierAtT);
  CHECK(brier.horizon == 250.0);
  const auto ibs = PerformanceScore::integrated_brier(0.1, 250.0);
  CHECK(ibs.orientation == Orientation::kLowerIsBetter);
  const auto ci = PerformanceScore::c_index(0.8);
  CHECK(ci.orientation == Orientation::kHigherIsBetter);
  CHECK_THROWS_AS(PerformanceScore::brier_at(1.2, 250.0), std::domain_error);
  CHECK_THROWS_AS(PerformanceScore::c_index(-0.1), std::domain_error);
}

TEST_CASE("Brier score on hand examples") {
  const auto test = make_test({1, 3}, {1, 1});
  SUBCASE("perfect predictions at horizon two") {
    CHECK(brier_score(std::vector<double>{1.0, 0.0}, test, 2.0, kNoCensoring) == 0.0);
  }
  SUBCASE("uniform half predictions score one quarter") {
    CHECK(brier_score(std::vector<double>{0.5, 0.5}, test, 2.0, kNoCensoring) ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("Brier score weights the three cases by the censoring curve") {
  // Event at 1 (weight 1/G(1-) = 1), censored at 2 (zero weight), survivor
  // past the horizon 3 (weight 1/G(3) = 2):
  // (0.04 * 1 + 0 + 0.16 * 2) / 3 = 0.12.
  const auto test = make_test({1, 2, 5}, {1, 0, 1});
  const StepFunction censor(1.0, {2.0}, {0.5});
  const std::vector<double> risks{0.8, 0.3, 0.4};
  const double value = brier_score(risks, test, 3.0, censor);
  CHECK(value == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(value == oracles::brier_brute(risks, test, 3.0, censor));
}

TEST_CASE("Brier score equals unweighted MSE under zero censoring") {
  Rng rng(47);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(100);
    std::vector<double> times;
    std::vector<std::uint8_t> events;
    oracles::random_survival(rng, n, 0.0, times, events);
    std::vector<double> risks(n);
    for (double& r : risks) {
      r = rng.uniform01();
    }
    const auto test = make_test(times, events);
    const double horizon = rng.uniform(0.0, 45.0);
    double mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double indicator = times[i] <= horizon ? 1.0 : 0.0;
      mse += (indicator - risks[i]) * (indicator - risks[i]);
    }
    mse /= static_cast<double>(n);
    CHECK(brier_score(risks, test, horizon, kNoCensoring) ==
          doctest::Approx(mse).epsilon(1e-12));
  }
}

TEST_CASE("Brier score reports the offending time when G hits zero") {
  const auto test = make_test({1, 5}, {1, 1});
  const StepFunction censor(1.0, {3.0}, {0.0});  // G vanishes at 3
  try {
    brier_score(std::vector<double>{0.5, 0.5}, test, 4.0, censor);
    FAIL("expected ScoringError");
  } catch (const ScoringError& e) {
    CHECK(e.offending_time() == 4.0);
  }
}

TEST_CASE("integrated Brier score") {
  SUBCASE("perfectly separable predictions everywhere integrate to zero") {
    const auto test = make_test({2, 50}, {1, 1});
    // Risk jumps to 1 exactly at each observation's event time.
    const std::vector<StepFunction> curves{StepFunction(0.0, {2.0}, {1.0}),
                                           StepFunction::constant(0.0)};
    CHECK(integrated_brier(curves, test, kNoCensoring, 10.0) == 0.0);
  }
  SUBCASE("constant half risk with one event at t_max/2 integrates to 0.25") {
    const auto test = make_test({5}, {1});
    const std::vector<StepFunction> curves{StepFunction::constant(0.5)};
    CHECK(integrated_brier(curves, test, kNoCensoring, 10.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("a constant Brier curve integrates to the pointwise score") {
    // All observations outlive t_max and share one constant risk curve, so
    // the Brier score is flat across the grid.
    const auto test = make_test({20, 30, 40}, {1, 1, 1});
    const std::vector<StepFunction> curves(3, StepFunction::constant(0.3));
    const double pointwise =
        brier_score(std::vector<double>{0.3, 0.3, 0.3}, test, 5.0, kNoCensoring);
    CHECK(integrated_brier(curves, test, kNoCensoring, 10.0) ==
          doctest::Approx(pointwise).epsilon(1e-12));
  }
  SUBCASE("duplicating every observation leaves the integral unchanged") {
    const auto test = make_test({2, 7}, {1, 0});
    const std::vector<StepFunction> curves{StepFunction(0.0, {1.5}, {0.75}),
                                           StepFunction(0.0, {3.0}, {0.5})};
    const auto doubled = make_test({2, 7, 2, 7}, {1, 0, 1, 0});
    const std::vector<StepFunction> doubled_curves{curves[0], curves[1], curves[0],
                                                   curves[1]};
    CHECK(integrated_brier(curves, test, kNoCensoring, 8.0) ==
          doctest::Approx(integrated_brier(doubled_curves, doubled, kNoCensoring, 8.0))
              .epsilon(1e-12));
  }
  SUBCASE("t_max must be positive") {
    const auto test = make_test({1}, {1});
    const std::vector<StepFunction> curves{StepFunction::constant(0.5)};
    CHECK_THROWS_AS(integrated_brier(curves, test, kNoCensoring, 0.0),
                    std::domain_error);
  }
}

TEST_CASE("concordance index on hand examples") {
  SUBCASE("perfect ordering scores one") {
    const auto test = make_test({1, 2, 3, 4}, {1, 1, 1, 1});
    CHECK(c_index(std::vector<double>{0.9, 0.7, 0.5, 0.3}, test) == 1.0);
  }
  SUBCASE("all ties score one half") {
    const auto test = make_test({1, 2, 3}, {1, 1, 1});
    CHECK(c_index(std::vector<double>{0.4, 0.4, 0.4}, test) == 0.5);
  }
  SUBCASE("mixed censoring case matches the exhaustive-pair oracle") {
    // Five comparable pairs, two discordant: 3/5.
    const auto test = make_test({2, 4, 4, 7}, {1, 0, 1, 1});
    const std::vector<double> risks{0.9, 0.2, 0.1, 0.3};
    const double value = c_index(risks, test);
    CHECK(value == doctest::Approx(0.6).epsilon(1e-12));
    double brute = 0.0;
    REQUIRE(oracles::cindex_brute(risks, test, brute));
    CHECK(value == brute);
  }
  SUBCASE("no comparable pairs raises") {
    const auto censored = make_test({1, 2}, {0, 0});
    CHECK_THROWS_AS(c_index(std::vector<double>{0.1, 0.2}, censored),
                    std::domain_error);
    const auto single = make_test({1}, {1});
    CHECK_THROWS_AS(c_index(std::vector<double>{0.1}, single), std::domain_error);
  }
}

TEST_CASE("concordance index equals the exhaustive-pair oracle on random data") {
  Rng rng(53);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + rng.below(29);
    std::vector<double> times;
    std::vector<std::uint8_t> events;
    oracles::random_survival(rng, n, 0.4, times, events);
    std::vector<double> risks(n);
    for (double& r : risks) {
      r = rng.below(8) / 8.0;  // coarse grid provokes risk ties
    }
    const auto test = make_test(times, events);
    double brute = 0.0;
    if (!oracles::cindex_brute(risks, test, brute)) {
      CHECK_THROWS_AS(c_index(risks, test), std::domain_error);
      continue;
    }
    CHECK(c_index(risks, test) == brute);
  }
}

TEST_CASE("concordance index is invariant under strictly monotone transforms") {
  Rng rng(59);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> times;
    std::vector<std::uint8_t> events;
    oracles::random_survival(rng, n, 0.3, times, events);
    std::vector<double> risks(n);
    std::vector<double> squashed(n);
    for (std::size_t i = 0; i < n; ++i) {
      risks[i] = rng.uniform01();
      squashed[i] = std::atan(3.0 * risks[i]);  // strictly increasing
    }
    const auto test = make_test(times, events);
    double brute = 0.0;
    if (!oracles::cindex_brute(risks, test, brute)) {
      continue;
    }
    CHECK(c_index(risks, test) == c_index(squashed, test));
  }
}

TEST_CASE("negating tie-free risks complements the concordance index") {
  Rng rng(61);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> times;
    std::vector<std::uint8_t> events;
    oracles::random_survival(rng, n, 0.3, times, events);
    std::vector<double> risks(n);
    for (std::size_t i = 0; i < n; ++i) {
      risks[i] = (static_cast<double>(i) + rng.uniform01() * 0.5) /
                 static_cast<double>(n);  // distinct by construction
    }
    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) {
      negated[i] = -risks[i];
    }
    const auto test = make_test(times, events);
    double brute = 0.0;
    if (!oracles::cindex_brute(risks, test, brute)) {
      continue;
    }
    CHECK(1.0 - c_index(risks, test) ==
          doctest::Approx(c_index(negated, test)).epsilon(1e-12));
  }
}
