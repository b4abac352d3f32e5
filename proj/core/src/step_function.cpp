#include "survmult/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace survmult {

StepFunction::StepFunction(double initial_value, std::vector<double> jump_times,
                           std::vector<double> values)
    : initial_value_(initial_value),
      jump_times_(std::move(jump_times)),
      values_(std::move(values)) {
  if (jump_times_.size() != values_.size()) {
    throw std::domain_error("StepFunction: one value per jump time required");
  }
  if (!std::isfinite(initial_value_)) {
    throw std::domain_error("StepFunction: initial value must be finite");
  }
  for (std::size_t i = 0; i < jump_times_.size(); ++i) {
    if (!std::isfinite(jump_times_[i]) || jump_times_[i] < 0.0) {
      throw std::domain_error("StepFunction: jump times must be finite and non-negative");
    }
    if (!std::isfinite(values_[i])) {
      throw std::domain_error("StepFunction: values must be finite");
    }
    if (i > 0 && !(jump_times_[i - 1] < jump_times_[i])) {
      throw std::domain_error("StepFunction: jump times must be strictly increasing");
    }
  }
}

double StepFunction::operator()(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("StepFunction: evaluation time must be non-negative");
  }
  // First jump strictly greater than t; the one before it governs [jump, t].
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) {
    return initial_value_;
  }
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::before(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("StepFunction: evaluation time must be non-negative");
  }
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) {
    return initial_value_;
  }
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

}  // namespace survmult
