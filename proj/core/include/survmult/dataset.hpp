#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace survmult {

// Survival dataset: n observations, each a covariate vector, an
// event-or-censoring time in cycles, and an event indicator
// (1 = failure observed, 0 = right-censored).
//
// Immutable after construction; all accessors are const. The constructor
// validates: n >= 1, times finite and >= 0, events in {0, 1}, features
// finite (no missing values), and consistent row lengths.
class SurvivalDataset {
public:
  SurvivalDataset(std::vector<double> features, std::size_t n_features,
                  std::vector<double> times, std::vector<std::uint8_t> events,
                  std::vector<std::string> feature_names);

  std::size_t n_rows() const noexcept { return times_.size(); }
  std::size_t n_features() const noexcept { return n_features_; }

  double feature(std::size_t row, std::size_t col) const {
    return features_[row * n_features_ + col];
  }
  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  double time(std::size_t i) const { return times_[i]; }
  bool event(std::size_t i) const { return events_[i] != 0; }

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::uint8_t>& events() const noexcept { return events_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  std::size_t event_count() const;

  // New dataset holding the given rows, in order. Indices may repeat
  // (bootstrap resamples).
  SurvivalDataset subset_rows(std::span<const std::size_t> rows) const;

  // New dataset holding the given feature columns, in order.
  SurvivalDataset select_features(std::span<const std::size_t> cols) const;

  bool operator==(const SurvivalDataset& other) const = default;

private:
  std::vector<double> features_;  // row-major, n_rows x n_features
  std::size_t n_features_;
  std::vector<double> times_;
  std::vector<std::uint8_t> events_;
  std::vector<std::string> feature_names_;
};

}  // namespace survmult
