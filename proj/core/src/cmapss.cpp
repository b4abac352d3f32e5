#include "survmult/cmapss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "survmult/errors.hpp"
#include "survmult/rng.hpp"
#include "text_util.hpp"

namespace survmult {

std::string to_string(CmapssSubset subset) {
  switch (subset) {
    case CmapssSubset::kFD001:
      return "FD001";
    case CmapssSubset::kFD002:
      return "FD002";
    case CmapssSubset::kFD003:
      return "FD003";
    case CmapssSubset::kFD004:
      return "FD004";
  }
  return "FD001";
}

std::optional<CmapssSubset> cmapss_subset_from_string(std::string_view name) {
  if (name == "FD001") {
    return CmapssSubset::kFD001;
  }
  if (name == "FD002") {
    return CmapssSubset::kFD002;
  }
  if (name == "FD003") {
    return CmapssSubset::kFD003;
  }
  if (name == "FD004") {
    return CmapssSubset::kFD004;
  }
  return std::nullopt;
}

std::size_t RawTelemetry::unit_count() const {
  std::vector<std::uint32_t> units;
  units.reserve(records.size());
  for (const auto& r : records) {
    units.push_back(r.unit);
  }
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());
  return units.size();
}

std::vector<std::string> cmapss_channel_names() {
  std::vector<std::string> names;
  names.reserve(kCmapssOpSettings + kCmapssSensors);
  for (std::size_t i = 1; i <= kCmapssOpSettings; ++i) {
    names.push_back("op_set_" + std::to_string(i));
  }
  for (std::size_t i = 1; i <= kCmapssSensors; ++i) {
    names.push_back("sensor_" + std::to_string(i));
  }
  return names;
}

namespace {

std::uint32_t parse_positive_integer(std::string_view token, std::size_t line,
                                     const char* what) {
  double value = 0.0;
  if (!detail::parse_double(token, value) || !(value >= 1.0) ||
      value != std::floor(value) || value > 4294967295.0) {
    throw ParseError(std::string("expected a positive integer for ") + what, line);
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

RawTelemetry parse_cmapss(std::istream& in, CmapssSubset subset) {
  RawTelemetry raw;
  raw.subset = subset;
  std::map<std::uint32_t, std::uint32_t> last_cycle;

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> tokens;
  while (std::getline(in, line)) {
    ++line_no;
    tokens.clear();
    std::istringstream split(line);
    std::string token;
    while (split >> token) {
      tokens.push_back(token);
    }
    if (tokens.empty()) {
      continue;  // blank line
    }
    if (tokens.size() != kCmapssColumns) {
      throw ParseError("expected " + std::to_string(kCmapssColumns) +
                           " columns, found " + std::to_string(tokens.size()),
                       line_no);
    }
    CmapssRecord rec;
    rec.unit = parse_positive_integer(tokens[0], line_no, "unit_number");
    rec.cycle = parse_positive_integer(tokens[1], line_no, "time_in_cycles");
    for (std::size_t c = 0; c < kCmapssOpSettings; ++c) {
      if (!detail::parse_double(tokens[2 + c], rec.op_settings[c])) {
        throw ParseError("malformed operational setting value", line_no);
      }
    }
    for (std::size_t c = 0; c < kCmapssSensors; ++c) {
      if (!detail::parse_double(tokens[2 + kCmapssOpSettings + c], rec.sensors[c])) {
        throw ParseError("malformed sensor value", line_no);
      }
    }

    auto [it, inserted] = last_cycle.try_emplace(rec.unit, 0);
    if (rec.cycle != it->second + 1) {
      throw ParseError("unit " + std::to_string(rec.unit) +
                           ": cycles must start at 1 and increment by 1",
                       line_no);
    }
    it->second = rec.cycle;
    raw.records.push_back(rec);
  }

  if (raw.records.empty()) {
    throw ParseError("no telemetry records found", 0);
  }
  return raw;
}

RawTelemetry parse_cmapss(const std::filesystem::path& path, CmapssSubset subset) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }
  return parse_cmapss(in, subset);
}

void write_cmapss(const std::filesystem::path& path, const RawTelemetry& raw) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  for (const auto& r : raw.records) {
    out << r.unit << ' ' << r.cycle;
    for (double v : r.op_settings) {
      out << ' ' << detail::format_double(v);
    }
    for (double v : r.sensors) {
      out << ' ' << detail::format_double(v);
    }
    out << '\n';
  }
}

SurvivalDataset to_survival(const RawTelemetry& raw, const CensoringPolicy& policy,
                            std::size_t feature_window, ShortUnitPolicy short_units,
                            std::vector<std::string>* warnings,
                            std::vector<std::uint32_t>* unit_ids) {
  if (!(policy.censor_time > 0.0)) {
    throw std::domain_error("to_survival: censor time must be positive");
  }
  if (feature_window == 0) {
    throw std::domain_error("to_survival: feature window must be positive");
  }

  // Rows of each unit in cycle order (the parser guarantees cycle order
  // within a unit even if units interleave).
  std::map<std::uint32_t, std::vector<const CmapssRecord*>> units;
  for (const auto& r : raw.records) {
    units[r.unit].push_back(&r);
  }

  const auto channels = cmapss_channel_names();
  const std::size_t n_channels = channels.size();
  std::vector<std::string> feature_names;
  feature_names.reserve(2 * n_channels);
  for (const auto& name : channels) {
    feature_names.push_back(name + "_mean");
    feature_names.push_back(name + "_slope");
  }

  std::vector<double> features;
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  if (unit_ids != nullptr) {
    unit_ids->clear();
  }

  const double w = static_cast<double>(feature_window);
  const double x_mean = (w + 1.0) / 2.0;
  double x_var = 0.0;  // sum of (x - x_mean)^2 over x = 1..w
  for (std::size_t x = 1; x <= feature_window; ++x) {
    const double d = static_cast<double>(x) - x_mean;
    x_var += d * d;
  }

  for (const auto& [unit, rows] : units) {
    if (rows.size() < feature_window) {
      const std::string message = "unit " + std::to_string(unit) + " has only " +
                                  std::to_string(rows.size()) +
                                  " cycles (< feature window " +
                                  std::to_string(feature_window) + ")";
      if (short_units == ShortUnitPolicy::kError) {
        throw std::domain_error("to_survival: " + message);
      }
      if (warnings != nullptr) {
        warnings->push_back("skipped " + message);
      }
      continue;
    }

    for (std::size_t c = 0; c < n_channels; ++c) {
      double sum = 0.0;
      double cross = 0.0;  // sum of (x - x_mean) * y
      for (std::size_t x = 1; x <= feature_window; ++x) {
        const auto& rec = *rows[x - 1];
        const double y = c < kCmapssOpSettings
                             ? rec.op_settings[c]
                             : rec.sensors[c - kCmapssOpSettings];
        sum += y;
        cross += (static_cast<double>(x) - x_mean) * y;
      }
      features.push_back(sum / w);
      features.push_back(x_var > 0.0 ? cross / x_var : 0.0);
    }

    const double final_cycle = static_cast<double>(rows.size());
    if (final_cycle > policy.censor_time) {
      times.push_back(policy.censor_time);
      events.push_back(0);
    } else {
      times.push_back(final_cycle);
      events.push_back(1);
    }
    if (unit_ids != nullptr) {
      unit_ids->push_back(unit);
    }
  }

  if (times.empty()) {
    throw std::domain_error("to_survival: no unit is at least as long as the feature window");
  }
  return SurvivalDataset(std::move(features), 2 * n_channels, std::move(times),
                         std::move(events), std::move(feature_names));
}

ConstantColumnReport find_constant_features(const SurvivalDataset& data,
                                            double tolerance) {
  if (!(tolerance >= 0.0)) {
    throw std::domain_error("find_constant_features: tolerance must be non-negative");
  }
  ConstantColumnReport report;
  const std::size_t n = data.n_rows();
  for (std::size_t c = 0; c < data.n_features(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      mean += data.feature(r, c);
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = data.feature(r, c) - mean;
      ss += d * d;
    }
    const double variance = n >= 2 ? ss / static_cast<double>(n - 1) : 0.0;
    if (variance <= tolerance) {
      report.removed.push_back(data.feature_names()[c]);
    } else {
      report.kept.push_back(c);
    }
  }
  return report;
}

SurvivalDataset drop_constant_features(const SurvivalDataset& data, double tolerance,
                                       std::vector<std::string>* removed) {
  auto report = find_constant_features(data, tolerance);
  if (report.kept.empty()) {
    throw std::domain_error("drop_constant_features: every column is constant");
  }
  if (removed != nullptr) {
    *removed = report.removed;
  }
  return data.select_features(report.kept);
}

std::pair<SurvivalDataset, SurvivalDataset> split_train_test(
    const SurvivalDataset& data, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    throw std::domain_error("split_train_test: ratio must lie in (0, 1)");
  }
  const std::size_t n = data.n_rows();
  const double target = ratio * static_cast<double>(n);
  // Snap near-integer products before the ceiling so ratios like 0.8 whose
  // binary representation sits a hair above the exact value do not spill an
  // extra row into the training side.
  const double rounded = std::round(target);
  const std::size_t n_train = static_cast<std::size_t>(
      std::fabs(target - rounded) < 1e-9 ? rounded : std::ceil(target));
  if (n_train == 0 || n_train >= n) {
    throw std::domain_error("split_train_test: a side of the split would be empty");
  }

  Rng rng(seed);
  const auto order = rng.permutation(n);
  const std::vector<std::size_t> train_rows(order.begin(), order.begin() + n_train);
  const std::vector<std::size_t> test_rows(order.begin() + n_train, order.end());
  return {data.subset_rows(train_rows), data.subset_rows(test_rows)};
}

void write_survival_csv(const std::filesystem::path& path, const SurvivalDataset& data,
                        const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# survmult-survival v1";
  if (!config_hash.empty()) {
    out << " config=" << config_hash;
  }
  out << '\n';
  for (const auto& name : data.feature_names()) {
    if (name.find(',') != std::string::npos || name == "time" || name == "event") {
      throw std::domain_error("write_survival_csv: invalid feature name: " + name);
    }
    out << name << ',';
  }
  out << "time,event\n";
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < data.n_features(); ++c) {
      out << detail::format_double(data.feature(r, c)) << ',';
    }
    out << detail::format_double(data.time(r)) << ',' << (data.event(r) ? 1 : 0)
        << '\n';
  }
}

SurvivalDataset read_survival_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream split(line);
    std::string col;
    while (std::getline(split, col, ',')) {
      header.push_back(col);
    }
    break;
  }
  if (header.size() < 3 || header[header.size() - 2] != "time" ||
      header.back() != "event") {
    throw ParseError("survival CSV header must end with time,event", line_no);
  }
  const std::size_t n_features = header.size() - 2;
  std::vector<std::string> names(header.begin(), header.end() - 2);

  std::vector<double> features;
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream split(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(split, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < n_features; ++c) {
      double v = 0.0;
      if (!detail::parse_double(cells[c], v)) {
        throw ParseError("malformed feature value: " + cells[c], line_no);
      }
      features.push_back(v);
    }
    double t = 0.0;
    if (!detail::parse_double(cells[n_features], t)) {
      throw ParseError("malformed time value: " + cells[n_features], line_no);
    }
    times.push_back(t);
    if (cells[n_features + 1] == "1") {
      events.push_back(1);
    } else if (cells[n_features + 1] == "0") {
      events.push_back(0);
    } else {
      throw ParseError("event indicator must be 0 or 1", line_no);
    }
  }
  if (times.empty()) {
    throw ParseError("survival CSV holds no observations", 0);
  }
  return SurvivalDataset(std::move(features), n_features, std::move(times),
                         std::move(events), std::move(names));
}

}  // namespace survmult
