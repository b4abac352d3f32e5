#pragma once

#include <cstdint>
#include <span>

#include "survmult/step_function.hpp"

namespace survmult {

// Kaplan-Meier product-limit estimate of the survival function. Jumps only
// at times with at least one observed event; ties at a time are aggregated;
// events are processed before censorings at the same time. Throws
// std::domain_error on empty or misaligned input.
StepFunction km_estimate(std::span<const double> times,
                         std::span<const std::uint8_t> events);

// Kaplan-Meier estimate of the censoring survival G(t) (indicator flipped:
// censoring is the event). Failures at a tied time leave the risk set before
// the censorings are processed.
StepFunction reverse_km_censoring(std::span<const double> times,
                                  std::span<const std::uint8_t> events);

// Nelson-Aalen cumulative hazard: H(t) = sum over event times u <= t of
// d_u / r_u, where d_u counts events at u and r_u the observations at risk.
StepFunction na_cumhaz(std::span<const double> times,
                       std::span<const std::uint8_t> events);

// Risk of the event occurring by time t given a cumulative hazard:
// 1 - exp(-H(t)). Value in [0, 1), non-decreasing in t.
double risk_from_chf(const StepFunction& chf, double t);

// Survival probability as the complement of risk. Throws std::domain_error
// unless risk lies in [0, 1].
double survival_from_risk(double risk);

}  // namespace survmult
