#include "survmult/splits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace survmult {

namespace {

void require_non_empty(const SurvivalGroup& g, const char* side) {
  if (g.times.empty()) {
    throw std::domain_error(std::string("split statistic: ") + side +
                            " group must be non-empty");
  }
  if (g.times.size() != g.events.size()) {
    throw std::domain_error("split statistic: times and events must align");
  }
}

struct PooledObs {
  double time;
  std::uint8_t event;
  bool in_left;
};

std::vector<PooledObs> pool_sorted(const SurvivalGroup& left, const SurvivalGroup& right) {
  std::vector<PooledObs> obs;
  obs.reserve(left.times.size() + right.times.size());
  for (std::size_t i = 0; i < left.times.size(); ++i) {
    obs.push_back({left.times[i], left.events[i], true});
  }
  for (std::size_t i = 0; i < right.times.size(); ++i) {
    obs.push_back({right.times[i], right.events[i], false});
  }
  std::stable_sort(obs.begin(), obs.end(),
                   [](const PooledObs& a, const PooledObs& b) { return a.time < b.time; });
  return obs;
}

}  // namespace

double logrank_stat(const SurvivalGroup& left, const SurvivalGroup& right) {
  require_non_empty(left, "left");
  require_non_empty(right, "right");

  const auto obs = pool_sorted(left, right);
  const std::size_t n = obs.size();

  double numerator = 0.0;
  double variance = 0.0;
  std::size_t at_risk = n;
  std::size_t at_risk_left = left.times.size();

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::size_t deaths = 0;
    std::size_t deaths_left = 0;
    std::size_t leaving_left = 0;
    while (j < n && obs[j].time == obs[i].time) {
      if (obs[j].event != 0) {
        ++deaths;
        if (obs[j].in_left) {
          ++deaths_left;
        }
      }
      if (obs[j].in_left) {
        ++leaving_left;
      }
      ++j;
    }
    // Hypergeometric mean/variance term; zero when fewer than two at risk.
    if (deaths > 0 && at_risk >= 2) {
      const double d = static_cast<double>(deaths);
      const double y = static_cast<double>(at_risk);
      const double y_left = static_cast<double>(at_risk_left);
      numerator += static_cast<double>(deaths_left) - y_left * (d / y);
      variance += (y_left / y) * (1.0 - y_left / y) * ((y - d) / (y - 1.0)) * d;
    }
    at_risk -= j - i;
    at_risk_left -= leaving_left;
    i = j;
  }

  if (!(variance > 0.0)) {
    return 0.0;
  }
  return std::fabs(numerator) / std::sqrt(variance);
}

double logrank_score_stat(const SurvivalGroup& left, const SurvivalGroup& right) {
  require_non_empty(left, "left");
  require_non_empty(right, "right");

  const auto obs = pool_sorted(left, right);
  const std::size_t n = obs.size();

  // Log-rank scores with maximal ranks on ties: a_i = eta_i - cumulative
  // sum of eta_k / (n - gamma_k + 1) over all k with t_k <= t_i, where
  // gamma is the tie-maximal rank.
  std::vector<double> scores(n);
  double cumulative = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && obs[j + 1].time == obs[i].time) {
      ++j;
    }
    const double denom = static_cast<double>(n - j);  // n - gamma + 1, gamma = j + 1
    for (std::size_t k = i; k <= j; ++k) {
      cumulative += static_cast<double>(obs[k].event) / denom;
    }
    for (std::size_t k = i; k <= j; ++k) {
      scores[k] = static_cast<double>(obs[k].event) - cumulative;
    }
    i = j + 1;
  }

  double total = 0.0;
  double left_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += scores[k];
    if (obs[k].in_left) {
      left_sum += scores[k];
    }
  }
  const double mean = total / static_cast<double>(n);
  double variance = 0.0;
  for (double s : scores) {
    variance += (s - mean) * (s - mean);
  }
  if (n < 2) {
    return 0.0;
  }
  variance /= static_cast<double>(n - 1);

  const double n_left = static_cast<double>(left.times.size());
  const double denom_sq = n_left * (1.0 - n_left / static_cast<double>(n)) * variance;
  if (!(denom_sq > 0.0)) {
    return 0.0;
  }
  return std::fabs(left_sum - n_left * mean) / std::sqrt(denom_sq);
}

}  // namespace survmult
