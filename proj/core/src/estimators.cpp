#include "survmult/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace survmult {

namespace {

struct TimeGroup {
  double time;
  std::size_t events;    // failures (indicator 1) at this time
  std::size_t censored;  // censorings (indicator 0) at this time
};

// Distinct observation times in ascending order with per-time failure and
// censoring counts.
std::vector<TimeGroup> aggregate_times(std::span<const double> times,
                                       std::span<const std::uint8_t> events) {
  if (times.empty()) {
    throw std::domain_error("survival estimate: at least one observation required");
  }
  if (times.size() != events.size()) {
    throw std::domain_error("survival estimate: times and events must align");
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return times[a] < times[b];
  });

  std::vector<TimeGroup> groups;
  for (std::size_t i : order) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw std::domain_error("survival estimate: times must be finite and non-negative");
    }
    if (events[i] > 1) {
      throw std::domain_error("survival estimate: event indicators must be 0 or 1");
    }
    if (groups.empty() || groups.back().time != times[i]) {
      groups.push_back({times[i], 0, 0});
    }
    if (events[i] != 0) {
      ++groups.back().events;
    } else {
      ++groups.back().censored;
    }
  }
  return groups;
}

}  // namespace

StepFunction km_estimate(std::span<const double> times,
                         std::span<const std::uint8_t> events) {
  const auto groups = aggregate_times(times, events);
  std::vector<double> jump_times;
  std::vector<double> values;
  double survival = 1.0;
  std::size_t at_risk = times.size();
  for (const auto& g : groups) {
    if (g.events > 0) {
      survival *= 1.0 - static_cast<double>(g.events) / static_cast<double>(at_risk);
      jump_times.push_back(g.time);
      values.push_back(survival);
    }
    at_risk -= g.events + g.censored;
  }
  return StepFunction(1.0, std::move(jump_times), std::move(values));
}

StepFunction reverse_km_censoring(std::span<const double> times,
                                  std::span<const std::uint8_t> events) {
  const auto groups = aggregate_times(times, events);
  std::vector<double> jump_times;
  std::vector<double> values;
  double censor_survival = 1.0;
  std::size_t at_risk = times.size();
  for (const auto& g : groups) {
    if (g.censored > 0) {
      // Failures at the same instant precede censorings, so they have
      // already left the risk set when the censoring mass drops.
      const std::size_t risk = at_risk - g.events;
      censor_survival *=
          1.0 - static_cast<double>(g.censored) / static_cast<double>(risk);
      jump_times.push_back(g.time);
      values.push_back(censor_survival);
    }
    at_risk -= g.events + g.censored;
  }
  return StepFunction(1.0, std::move(jump_times), std::move(values));
}

StepFunction na_cumhaz(std::span<const double> times,
                       std::span<const std::uint8_t> events) {
  const auto groups = aggregate_times(times, events);
  std::vector<double> jump_times;
  std::vector<double> values;
  double hazard = 0.0;
  std::size_t at_risk = times.size();
  for (const auto& g : groups) {
    if (g.events > 0) {
      hazard += static_cast<double>(g.events) / static_cast<double>(at_risk);
      jump_times.push_back(g.time);
      values.push_back(hazard);
    }
    at_risk -= g.events + g.censored;
  }
  return StepFunction(0.0, std::move(jump_times), std::move(values));
}

double risk_from_chf(const StepFunction& chf, double t) {
  // -expm1(-H) keeps precision for small hazards; equals 1 - exp(-H).
  return -std::expm1(-chf(t));
}

double survival_from_risk(double risk) {
  if (!(risk >= 0.0) || !(risk <= 1.0)) {
    throw std::domain_error("survival_from_risk: risk must lie in [0, 1]");
  }
  return 1.0 - risk;
}

}  // namespace survmult
