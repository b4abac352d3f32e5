#include "survmult/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "survmult/errors.hpp"

namespace survmult {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kBrierAtT:
      return "brier_at_t";
    case MetricKind::kIntegratedBrier:
      return "integrated_brier";
    case MetricKind::kCIndex:
      return "c_index";
  }
  return "brier_at_t";
}

std::optional<MetricKind> metric_kind_from_string(std::string_view name) {
  if (name == "brier_at_t") {
    return MetricKind::kBrierAtT;
  }
  if (name == "integrated_brier") {
    return MetricKind::kIntegratedBrier;
  }
  if (name == "c_index") {
    return MetricKind::kCIndex;
  }
  return std::nullopt;
}

namespace {

void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0) || !(value <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

PerformanceScore PerformanceScore::brier_at(double value, double horizon) {
  check_unit_interval(value, "Brier score");
  if (!(horizon >= 0.0)) {
    throw std::domain_error("Brier horizon must be non-negative");
  }
  return {value, MetricKind::kBrierAtT, Orientation::kLowerIsBetter, horizon};
}

PerformanceScore PerformanceScore::integrated_brier(double value, double t_max) {
  check_unit_interval(value, "integrated Brier score");
  if (!(t_max > 0.0)) {
    throw std::domain_error("integrated Brier t_max must be positive");
  }
  return {value, MetricKind::kIntegratedBrier, Orientation::kLowerIsBetter, t_max};
}

PerformanceScore PerformanceScore::c_index(double value) {
  check_unit_interval(value, "concordance index");
  return {value, MetricKind::kCIndex, Orientation::kHigherIsBetter, std::nullopt};
}

double brier_score(std::span<const double> risks, const SurvivalDataset& test,
                   double horizon, const StepFunction& censor_curve) {
  if (risks.size() != test.n_rows()) {
    throw std::domain_error("brier_score: one risk per test observation required");
  }
  if (!(horizon >= 0.0)) {
    throw std::domain_error("brier_score: horizon must be non-negative");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < test.n_rows(); ++i) {
    const double t_i = test.time(i);
    const double r = risks[i];
    if (t_i <= horizon && test.event(i)) {
      const double g = censor_curve.before(t_i);
      if (!(g > 0.0)) {
        throw ScoringError("brier_score: censoring survival is zero at an event weight",
                           t_i);
      }
      acc += (1.0 - r) * (1.0 - r) / g;
    } else if (t_i > horizon) {
      const double g = censor_curve(horizon);
      if (!(g > 0.0)) {
        throw ScoringError("brier_score: censoring survival is zero at the horizon",
                           horizon);
      }
      acc += r * r / g;
    }
    // censored by the horizon: zero weight
  }
  return acc / static_cast<double>(test.n_rows());
}

double integrated_brier(std::span<const StepFunction> risk_curves,
                        const SurvivalDataset& test,
                        const StepFunction& censor_curve, double t_max,
                        std::size_t grid_points) {
  if (!(t_max > 0.0)) {
    throw std::domain_error("integrated_brier: t_max must be positive");
  }
  if (grid_points == 0) {
    throw std::domain_error("integrated_brier: at least one grid point required");
  }
  if (risk_curves.size() != test.n_rows()) {
    throw std::domain_error("integrated_brier: one risk curve per observation required");
  }

  const double step = t_max / static_cast<double>(grid_points);
  std::vector<double> risks(test.n_rows());
  double integral = 0.0;
  double previous = 0.0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double h = step * static_cast<double>(k + 1);
    for (std::size_t i = 0; i < test.n_rows(); ++i) {
      risks[i] = risk_curves[i](h);
    }
    const double bs = brier_score(risks, test, h, censor_curve);
    // First segment [0, step] extends the first horizon's score leftward.
    integral += k == 0 ? bs * step : 0.5 * (previous + bs) * step;
    previous = bs;
  }
  return integral / t_max;
}

double c_index(std::span<const double> risks, const SurvivalDataset& test) {
  if (risks.size() != test.n_rows()) {
    throw std::domain_error("c_index: one risk per test observation required");
  }
  if (test.n_rows() < 2) {
    throw std::domain_error("c_index: no comparable pairs");
  }
  double concordant = 0.0;
  std::size_t comparable = 0;
  const std::size_t n = test.n_rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t earlier;
      std::size_t other;
      if (test.time(i) < test.time(j) && test.event(i)) {
        earlier = i;
        other = j;
      } else if (test.time(j) < test.time(i) && test.event(j)) {
        earlier = j;
        other = i;
      } else if (test.time(i) == test.time(j) && test.event(i) != test.event(j)) {
        earlier = test.event(i) ? i : j;
        other = test.event(i) ? j : i;
      } else {
        continue;
      }
      ++comparable;
      if (risks[earlier] > risks[other]) {
        concordant += 1.0;
      } else if (risks[earlier] == risks[other]) {
        concordant += 0.5;
      }
    }
  }
  if (comparable == 0) {
    throw std::domain_error("c_index: no comparable pairs");
  }
  return concordant / static_cast<double>(comparable);
}

}  // namespace survmult
