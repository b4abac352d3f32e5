#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "survmult/cmapss.hpp"
#include "survmult/grid.hpp"
#include "survmult/metrics.hpp"
#include "survmult/rashomon.hpp"
#include "survmult/report_io.hpp"

namespace survmult {

// Resolved experiment configuration. Every field has a default, so a bare
// `sweep --dataset FD001` works; the resolved form is echoed into the
// output directory and hashed into every emitted file for provenance.
struct ExperimentConfig {
  std::filesystem::path data_dir = "data";
  std::vector<CmapssSubset> subsets = {CmapssSubset::kFD001};
  double censor_time = 250.0;
  std::size_t feature_window = 30;
  double split_ratio = 0.8;
  std::uint64_t seed = 42;
  std::string profile = "desk";  // desk | paper | custom
  GridSpec grid = desk_profile();
  MetricKind membership_metric = MetricKind::kBrierAtT;
  double membership_horizon = 250.0;  // defaults to censor_time
  bool common_horizon_mode = false;   // cube entries at a shared horizon
  double common_horizon = 250.0;
  std::vector<double> eps_grid = {0.01, 0.05, 0.10};
  std::vector<double> delta_grid = {0.01, 0.05, 0.10};
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::filesystem::path out_dir = "out";
  double constant_tolerance = 1e-12;
  ShortUnitPolicy short_unit_policy = ShortUnitPolicy::kSkipWithWarning;
  std::size_t ibs_grid_points = 100;
  bool save_models = false;

  // Throws std::domain_error / std::invalid_argument on out-of-range or
  // inconsistent fields.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// JSON round trip. Unknown keys are rejected so typos fail loudly.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);

// FNV-1a hash (16 hex digits) of the canonical resolved-config JSON.
std::string config_hash(const ExperimentConfig& config);

// Per-model evaluation on the held-out test split.
struct ModelEvaluation {
  HyperParams hyperparams;
  std::uint64_t seed = 0;
  PerformanceScore membership_score;
  double c_index_value = 0.0;
};

struct SubsetArtifacts {
  CmapssSubset subset = CmapssSubset::kFD001;
  MultiplicityReport report;
  std::vector<RashomonCharacteristicsRow> rashomon_rows;
  std::filesystem::path report_csv;
  std::filesystem::path rashomon_csv;
  std::filesystem::path cube_file;
  std::vector<std::filesystem::path> heatmaps;
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  std::vector<SubsetArtifacts> subsets;
};

// Trains the configured grid on one ingested survival dataset and builds
// the prediction cube (membership scores, companion c-index, risks at each
// observation's own time or the common horizon).
PredictionCube train_and_score(const SurvivalDataset& train, const SurvivalDataset& test,
                               const ExperimentConfig& config,
                               std::vector<std::string>* warnings = nullptr,
                               std::vector<SurvivalForest>* models_out = nullptr);

// Full pipeline per configured subset: ingest -> reformulate -> split ->
// train grid -> score -> cube -> sweep, writing report/rashomon CSVs, one
// heatmap per metric, the serialized cube, the reformulated dataset and the
// resolved config. A failed subset leaves a FAILED_<subset>.txt marker and
// the error is rethrown after the remaining subsets finish.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Sweep + artifact emission from an existing cube (the external-trainer
// entry point behind the `analyze` subcommand).
SubsetArtifacts analyze_cube(const PredictionCube& cube, const std::string& dataset_id,
                             std::span<const double> eps_grid,
                             std::span<const double> delta_grid,
                             const std::filesystem::path& out_dir,
                             const std::string& hash, std::size_t threads = 1);

}  // namespace survmult
