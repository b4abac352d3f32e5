#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "survmult/dataset.hpp"

namespace survmult {

enum class CmapssSubset { kFD001, kFD002, kFD003, kFD004 };

inline constexpr std::size_t kCmapssOpSettings = 3;
inline constexpr std::size_t kCmapssSensors = 21;
inline constexpr std::size_t kCmapssColumns = 2 + kCmapssOpSettings + kCmapssSensors;

std::string to_string(CmapssSubset subset);
std::optional<CmapssSubset> cmapss_subset_from_string(std::string_view name);

// One row of the raw telemetry: engine id, cycle counter, three operational
// settings and twenty-one sensor channels, in the canonical column order.
struct CmapssRecord {
  std::uint32_t unit = 0;
  std::uint32_t cycle = 0;
  std::array<double, kCmapssOpSettings> op_settings{};
  std::array<double, kCmapssSensors> sensors{};

  bool operator==(const CmapssRecord&) const = default;
};

// Parsed run-to-failure telemetry for one subset. Per unit, cycles start at
// 1 and increment by 1 without gaps; the parser enforces this.
struct RawTelemetry {
  CmapssSubset subset = CmapssSubset::kFD001;
  std::vector<CmapssRecord> records;

  std::size_t unit_count() const;

  bool operator==(const RawTelemetry&) const = default;
};

struct CensoringPolicy {
  double censor_time = 250.0;
};

enum class ShortUnitPolicy { kSkipWithWarning, kError };

// Column labels of the raw channels, canonical order:
// op_set_1..3 then sensor_1..21.
std::vector<std::string> cmapss_channel_names();

// Parses whitespace-separated numeric text with 26 columns per row. Throws
// ParseError (with the line number) on malformed rows, wrong column counts,
// empty input, or per-unit cycle sequences that do not start at 1 and
// increment by 1.
RawTelemetry parse_cmapss(const std::filesystem::path& path, CmapssSubset subset);
RawTelemetry parse_cmapss(std::istream& in, CmapssSubset subset);

// Writes telemetry back out in the same 26-column format; numbers use the
// shortest round-trip representation so a parse of the written file
// reproduces the records exactly.
void write_cmapss(const std::filesystem::path& path, const RawTelemetry& raw);

// Reformulates run-to-failure telemetry into one survival observation per
// engine: the event time is the final recorded cycle, administratively
// censored at policy.censor_time; the features are the per-channel mean and
// least-squares slope over the FIRST feature_window cycles only, so no
// outcome information leaks into the covariates. Units shorter than the
// window are skipped with a warning (collected into *warnings when given)
// or raise std::domain_error under ShortUnitPolicy::kError. Rows are
// ordered by ascending unit number; retained unit ids land in *unit_ids
// when given.
SurvivalDataset to_survival(const RawTelemetry& raw, const CensoringPolicy& policy,
                            std::size_t feature_window,
                            ShortUnitPolicy short_units = ShortUnitPolicy::kSkipWithWarning,
                            std::vector<std::string>* warnings = nullptr,
                            std::vector<std::uint32_t>* unit_ids = nullptr);

// Columns whose sample variance is <= tolerance, and the survivors.
struct ConstantColumnReport {
  std::vector<std::size_t> kept;
  std::vector<std::string> removed;
};

ConstantColumnReport find_constant_features(const SurvivalDataset& data,
                                            double tolerance);

// Drops the constant columns; removed names land in *removed when given.
// Throws std::domain_error when nothing would remain.
SurvivalDataset drop_constant_features(const SurvivalDataset& data, double tolerance,
                                       std::vector<std::string>* removed = nullptr);

// Engine-level split: rows are shuffled by a seeded permutation and the
// first ceil(ratio * n) go to the training side. Throws std::domain_error
// when either side would be empty or ratio is outside (0, 1).
std::pair<SurvivalDataset, SurvivalDataset> split_train_test(
    const SurvivalDataset& data, double ratio, std::uint64_t seed);

// Reformulated-dataset file format: optional '#' comment lines, then a
// header row of feature names plus `time` and `event`, then one CSV row per
// engine. Numbers use the shortest round-trip representation.
void write_survival_csv(const std::filesystem::path& path, const SurvivalDataset& data,
                        const std::string& config_hash = {});
SurvivalDataset read_survival_csv(const std::filesystem::path& path);

}  // namespace survmult
