#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "survmult/dataset.hpp"
#include "survmult/step_function.hpp"

namespace survmult {

enum class MetricKind { kBrierAtT, kIntegratedBrier, kCIndex };
enum class Orientation { kLowerIsBetter, kHigherIsBetter };

std::string to_string(MetricKind kind);
std::optional<MetricKind> metric_kind_from_string(std::string_view name);

// One scalar model performance with its comparison direction. Brier
// variants are lower-is-better, the concordance index higher-is-better;
// the factories enforce that pairing and the value ranges.
struct PerformanceScore {
  double value = 0.0;
  MetricKind kind = MetricKind::kBrierAtT;
  Orientation orientation = Orientation::kLowerIsBetter;
  std::optional<double> horizon;

  static PerformanceScore brier_at(double value, double horizon);
  static PerformanceScore integrated_brier(double value, double t_max);
  static PerformanceScore c_index(double value);

  // True when `candidate` is at least as good as `other` under this score's
  // orientation.
  bool better_or_equal(double candidate, double other) const {
    return orientation == Orientation::kLowerIsBetter ? candidate <= other
                                                      : candidate >= other;
  }

  bool operator==(const PerformanceScore&) const = default;
};

// Inverse-probability-of-censoring-weighted Brier score at one horizon.
//
// risks[i] is the predicted risk of observation i at `horizon`. Weights:
// events before or at the horizon get 1/G(t_i-), observations surviving
// past the horizon get 1/G(horizon), observations censored by the horizon
// contribute zero. The sum of weighted squared errors is divided by n.
// Throws ScoringError when a needed weight divides by G = 0.
double brier_score(std::span<const double> risks, const SurvivalDataset& test,
                   double horizon, const StepFunction& censor_curve);

// Trapezoidal average of the Brier score over `grid_points` uniform
// horizons on (0, t_max]; the leading [0, t_max/grid_points] segment
// carries the first horizon's score, so a constant Brier curve integrates
// to itself. risk_curves[i] is observation i's predicted risk over time.
double integrated_brier(std::span<const StepFunction> risk_curves,
                        const SurvivalDataset& test,
                        const StepFunction& censor_curve, double t_max,
                        std::size_t grid_points = 100);

// Harrell's concordance index. A pair is comparable when the earlier time
// is an observed event (or the times tie with exactly one event); it is
// concordant when the earlier failure carries the strictly higher risk, and
// risk ties count one half. Throws std::domain_error when no pair is
// comparable.
double c_index(std::span<const double> risks, const SurvivalDataset& test);

}  // namespace survmult
