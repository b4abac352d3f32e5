#pragma once

#include <cstdint>
#include <span>

namespace survmult {

// One side of a candidate split: the member times and event indicators.
struct SurvivalGroup {
  std::span<const double> times;
  std::span<const std::uint8_t> events;
};

// Absolute standardized two-sample log-rank statistic. Larger values mean
// better separation. Returns 0 when the variance degenerates (no events, or
// exhausted risk sets), so a degenerate split is never preferred. Throws
// std::domain_error when either group is empty.
double logrank_stat(const SurvivalGroup& left, const SurvivalGroup& right);

// Absolute standardized log-rank score statistic: the pooled sample gets
// log-rank scores (maximal ranks on ties), and the left group's centered
// score sum is standardized by sqrt(n_left * (1 - n_left/n) * var(scores)).
// Same degenerate-case and error behavior as logrank_stat.
double logrank_score_stat(const SurvivalGroup& left, const SurvivalGroup& right);

}  // namespace survmult
