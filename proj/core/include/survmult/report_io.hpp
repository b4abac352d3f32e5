#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "survmult/rashomon.hpp"

namespace survmult {

// Long-format multiplicity report CSV:
//   # survmult-report v1 config=<hash>
//   dataset,epsilon,delta,metric,value
// with one row per metric in {ambiguity, discrepancy, obscurity,
// rashomon_size} per (epsilon, delta) cell.
void write_report_csv(const std::filesystem::path& path, const MultiplicityReport& report,
                      const std::string& config_hash = {});

// Reads one or more long-format report files back into per-dataset reports.
// Throws ParseError on malformed input; loaded reports are validated.
std::vector<MultiplicityReport> read_report_csv(const std::filesystem::path& path);

// Rashomon characteristics per epsilon: set size plus the members'
// performance range under the membership metric and, when available, their
// concordance-index range.
struct RashomonCharacteristicsRow {
  double epsilon = 0.0;
  std::size_t size = 0;
  std::string metric;
  double phi_reference = 0.0;
  double phi_worst = 0.0;
  double c_index_min = 0.0;  // NaN when the companion metric is absent
  double c_index_max = 0.0;
};

std::vector<RashomonCharacteristicsRow> rashomon_characteristics(
    const PredictionCube& cube, std::span<const double> eps_grid);

void write_rashomon_csv(const std::filesystem::path& path, const std::string& dataset_id,
                        const std::vector<RashomonCharacteristicsRow>& rows,
                        const std::string& config_hash = {});

// Fixed-width wide view of one or more reports: one line per (epsilon,
// delta) cell with ambiguity/discrepancy/obscurity at four decimals,
// datasets in ascending id order.
std::string render_report_table(const std::vector<MultiplicityReport>& reports);

}  // namespace survmult
