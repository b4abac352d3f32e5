#include "survmult/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace survmult {

SurvivalDataset::SurvivalDataset(std::vector<double> features, std::size_t n_features,
                                 std::vector<double> times,
                                 std::vector<std::uint8_t> events,
                                 std::vector<std::string> feature_names)
    : features_(std::move(features)),
      n_features_(n_features),
      times_(std::move(times)),
      events_(std::move(events)),
      feature_names_(std::move(feature_names)) {
  const std::size_t n = times_.size();
  if (n == 0) {
    throw std::domain_error("SurvivalDataset: at least one observation required");
  }
  if (events_.size() != n) {
    throw std::domain_error("SurvivalDataset: times and events must align");
  }
  if (features_.size() != n * n_features_) {
    throw std::domain_error("SurvivalDataset: feature matrix shape mismatch");
  }
  if (feature_names_.size() != n_features_) {
    throw std::domain_error("SurvivalDataset: one name per feature required");
  }
  for (double t : times_) {
    if (!std::isfinite(t) || t < 0.0) {
      throw std::domain_error("SurvivalDataset: times must be finite and non-negative");
    }
  }
  for (std::uint8_t e : events_) {
    if (e > 1) {
      throw std::domain_error("SurvivalDataset: event indicators must be 0 or 1");
    }
  }
  for (double x : features_) {
    if (!std::isfinite(x)) {
      throw std::domain_error("SurvivalDataset: features must contain no missing values");
    }
  }
}

std::size_t SurvivalDataset::event_count() const {
  std::size_t k = 0;
  for (std::uint8_t e : events_) {
    k += e;
  }
  return k;
}

SurvivalDataset SurvivalDataset::subset_rows(std::span<const std::size_t> rows) const {
  std::vector<double> features;
  features.reserve(rows.size() * n_features_);
  std::vector<double> times;
  times.reserve(rows.size());
  std::vector<std::uint8_t> events;
  events.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n_rows()) {
      throw std::domain_error("SurvivalDataset: row index out of range");
    }
    const auto view = row(r);
    features.insert(features.end(), view.begin(), view.end());
    times.push_back(times_[r]);
    events.push_back(events_[r]);
  }
  return SurvivalDataset(std::move(features), n_features_, std::move(times),
                         std::move(events), feature_names_);
}

SurvivalDataset SurvivalDataset::select_features(std::span<const std::size_t> cols) const {
  std::vector<double> features;
  features.reserve(n_rows() * cols.size());
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (std::size_t c : cols) {
    if (c >= n_features_) {
      throw std::domain_error("SurvivalDataset: column index out of range");
    }
  }
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t c : cols) {
      features.push_back(feature(r, c));
    }
  }
  for (std::size_t c : cols) {
    names.push_back(feature_names_[c]);
  }
  return SurvivalDataset(std::move(features), cols.size(), times_, events_,
                         std::move(names));
}

}  // namespace survmult
