#pragma once

#include <cstddef>
#include <vector>

namespace survmult {

// Right-continuous piecewise-constant function over time.
//
// Value is initial_value on [0, jump_times[0]) and values[k] on
// [jump_times[k], jump_times[k+1]). Carrier for Kaplan-Meier survival
// curves, Nelson-Aalen cumulative hazards and per-model risk curves.
class StepFunction {
public:
  // jump_times must be strictly increasing and non-negative; one value per
  // jump. Throws std::domain_error otherwise. An empty jump list is the
  // constant function initial_value.
  StepFunction(double initial_value, std::vector<double> jump_times,
               std::vector<double> values);

  // Constant function.
  static StepFunction constant(double value) { return StepFunction(value, {}, {}); }

  // Right-continuous evaluation: the value attached to the largest
  // jump_time <= t, else initial_value. Throws std::domain_error for t < 0.
  double operator()(double t) const;

  // Left limit: the value attached to the largest jump_time < t, else
  // initial_value. Throws std::domain_error for t < 0.
  double before(double t) const;

  double initial_value() const noexcept { return initial_value_; }
  const std::vector<double>& jump_times() const noexcept { return jump_times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t jump_count() const noexcept { return jump_times_.size(); }

  bool operator==(const StepFunction& other) const = default;

private:
  double initial_value_;
  std::vector<double> jump_times_;
  std::vector<double> values_;
};

}  // namespace survmult
