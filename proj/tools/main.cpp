// survmult: predictive-multiplicity analysis for survival models on
// CMAPSS-style run-to-failure data.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "survmult/cmapss.hpp"
#include "survmult/cmapss_sim.hpp"
#include "survmult/cube_io.hpp"
#include "survmult/experiment.hpp"
#include "survmult/forest_io.hpp"
#include "survmult/report_io.hpp"

namespace {

using survmult::CmapssSubset;
using survmult::ExperimentConfig;

struct CliOverrides {
  std::string config_path;
  std::vector<std::string> datasets;
  std::string data_dir;
  std::string out_dir;
  std::vector<double> eps_grid;
  std::vector<double> delta_grid;
  std::uint64_t seed = 0;
  std::string profile;
  double censor_time = 0.0;
  std::size_t window = 0;
  double ratio = 0.0;
  std::size_t threads = 0;
  std::string metric;
  bool save_models = false;
};

// Registers the shared pipeline flags on a subcommand; values land in
// `over` and only explicitly passed flags override the config file.
void add_pipeline_options(CLI::App* cmd, CliOverrides& over) {
  cmd->add_option("--config", over.config_path,
                  "JSON experiment configuration (flags override it)");
  cmd->add_option("--dataset", over.datasets,
                  "CMAPSS subset(s): FD001..FD004")
      ->delimiter(',');
  cmd->add_option("--data-dir", over.data_dir,
                  "Directory holding train_<subset>.txt files");
  cmd->add_option("--out", over.out_dir, "Output directory");
  cmd->add_option("--epsilon-grid", over.eps_grid,
                  "Rashomon tolerances, ascending in (0, 1]")
      ->delimiter(',');
  cmd->add_option("--delta-grid", over.delta_grid,
                  "Conflict thresholds, ascending in (0, 1)")
      ->delimiter(',');
  cmd->add_option("--seed", over.seed, "Master seed");
  cmd->add_option("--profile", over.profile, "Grid profile: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--censor-time", over.censor_time,
                  "Administrative censoring time in cycles");
  cmd->add_option("--window", over.window,
                  "Feature window: leading cycles used for covariates");
  cmd->add_option("--ratio", over.ratio, "Train fraction of the engine split");
  cmd->add_option("--threads", over.threads, "Worker threads (0 = hardware)");
  cmd->add_option("--metric", over.metric,
                  "Rashomon membership metric: brier_at_t, integrated_brier, c_index")
      ->check(CLI::IsMember({"brier_at_t", "integrated_brier", "c_index"}));
  cmd->add_flag("--save-models", over.save_models, "Persist every trained forest");
}

ExperimentConfig resolve_config(const CLI::App* cmd, const CliOverrides& over) {
  ExperimentConfig config;
  if (cmd->count("--config") > 0) {
    config = survmult::load_config(over.config_path);
  }
  if (cmd->count("--dataset") > 0) {
    config.subsets.clear();
    for (const auto& name : over.datasets) {
      const auto subset = survmult::cmapss_subset_from_string(name);
      if (!subset) {
        throw CLI::ValidationError("--dataset", "unknown subset: " + name);
      }
      config.subsets.push_back(*subset);
    }
  }
  if (cmd->count("--data-dir") > 0) {
    config.data_dir = over.data_dir;
  }
  if (cmd->count("--out") > 0) {
    config.out_dir = over.out_dir;
  }
  if (cmd->count("--epsilon-grid") > 0) {
    config.eps_grid = over.eps_grid;
  }
  if (cmd->count("--delta-grid") > 0) {
    config.delta_grid = over.delta_grid;
  }
  if (cmd->count("--seed") > 0) {
    config.seed = over.seed;
  }
  if (cmd->count("--profile") > 0) {
    config.profile = over.profile;
    config.grid = over.profile == "paper" ? survmult::paper_profile()
                                          : survmult::desk_profile();
  }
  if (cmd->count("--censor-time") > 0) {
    config.censor_time = over.censor_time;
    config.membership_horizon = over.censor_time;
    config.common_horizon = over.censor_time;
  }
  if (cmd->count("--window") > 0) {
    config.feature_window = over.window;
  }
  if (cmd->count("--ratio") > 0) {
    config.split_ratio = over.ratio;
  }
  if (cmd->count("--threads") > 0) {
    config.threads = over.threads;
  }
  if (cmd->count("--metric") > 0) {
    config.membership_metric = *survmult::metric_kind_from_string(over.metric);
  }
  if (cmd->count("--save-models") > 0) {
    config.save_models = true;
  }
  config.validate();
  return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

int cmd_ingest(const CLI::App* cmd, const CliOverrides& over) {
  const auto config = resolve_config(cmd, over);
  std::filesystem::create_directories(config.out_dir);
  const auto hash = survmult::config_hash(config);
  for (CmapssSubset subset : config.subsets) {
    const auto name = to_string(subset);
    const auto raw =
        survmult::parse_cmapss(config.data_dir / ("train_" + name + ".txt"), subset);
    std::vector<std::string> warnings;
    const auto data = survmult::to_survival(raw, {config.censor_time},
                                            config.feature_window,
                                            config.short_unit_policy, &warnings);
    print_warnings(warnings);
    const auto out = config.out_dir / ("survival_" + name + ".csv");
    survmult::write_survival_csv(out, data, hash);
    std::cout << name << ": " << data.n_rows() << " engines, "
              << data.event_count() << " observed failures -> " << out.string()
              << '\n';
  }
  return 0;
}

int cmd_train(const CLI::App* cmd, const CliOverrides& over) {
  const auto config = resolve_config(cmd, over);
  std::filesystem::create_directories(config.out_dir);
  const auto hash = survmult::config_hash(config);
  for (CmapssSubset subset : config.subsets) {
    const auto name = to_string(subset);
    const auto raw =
        survmult::parse_cmapss(config.data_dir / ("train_" + name + ".txt"), subset);
    std::vector<std::string> warnings;
    const auto full = survmult::to_survival(raw, {config.censor_time},
                                            config.feature_window,
                                            config.short_unit_policy, &warnings);
    auto [train, test] =
        survmult::split_train_test(full, config.split_ratio, config.seed);
    const auto columns =
        survmult::find_constant_features(train, config.constant_tolerance);
    if (columns.kept.empty()) {
      throw std::runtime_error(name + ": every feature column is constant");
    }
    const auto train_kept = train.select_features(columns.kept);
    const auto test_kept = test.select_features(columns.kept);

    std::vector<survmult::SurvivalForest> models;
    const auto cube =
        survmult::train_and_score(train_kept, test_kept, config, &warnings,
                                  config.save_models ? &models : nullptr);
    print_warnings(warnings);

    const auto cube_path = config.out_dir / ("cube_" + name + ".cube");
    survmult::write_cube(cube_path, cube, hash);
    survmult::write_survival_csv(config.out_dir / ("survival_" + name + ".csv"),
                                 full, hash);
    if (config.save_models) {
      const auto model_dir = config.out_dir / "models" / name;
      std::filesystem::create_directories(model_dir);
      for (std::size_t k = 0; k < models.size(); ++k) {
        char file[32];
        std::snprintf(file, sizeof(file), "model_%05zu.forest", k);
        survmult::save_forest(model_dir / file, models[k]);
      }
    }
    std::cout << name << ": trained " << cube.n_models << " models on "
              << train_kept.n_rows() << " engines, reference "
              << cube.model_ids[cube.reference_index] << " -> " << cube_path.string()
              << '\n';
  }
  return 0;
}

int cmd_sweep(const CLI::App* cmd, const CliOverrides& over) {
  const auto config = resolve_config(cmd, over);
  const auto result = survmult::run_experiment(config);
  for (const auto& subset : result.subsets) {
    print_warnings(subset.warnings);
    std::cout << to_string(subset.subset) << ": " << subset.report.rows.size()
              << " sweep cells -> " << subset.report_csv.string() << '\n';
  }
  return 0;
}

int cmd_analyze(const std::string& cube_path, std::string dataset_id,
                const CLI::App* cmd, const CliOverrides& over) {
  ExperimentConfig config;
  if (cmd->count("--epsilon-grid") > 0) {
    config.eps_grid = over.eps_grid;
  }
  if (cmd->count("--delta-grid") > 0) {
    config.delta_grid = over.delta_grid;
  }
  if (cmd->count("--out") > 0) {
    config.out_dir = over.out_dir;
  }
  if (cmd->count("--threads") > 0) {
    config.threads = over.threads;
  }
  const auto cube = survmult::read_cube(cube_path);
  if (dataset_id.empty()) {
    dataset_id = std::filesystem::path(cube_path).stem().string();
    if (dataset_id.rfind("cube_", 0) == 0) {
      dataset_id = dataset_id.substr(5);
    }
  }
  // The cube is the provenance unit here; hash its identifying line instead
  // of a pipeline config.
  const auto artifacts =
      survmult::analyze_cube(cube, dataset_id, config.eps_grid, config.delta_grid,
                             config.out_dir, "", config.threads);
  std::cout << dataset_id << ": " << artifacts.report.rows.size()
            << " sweep cells -> " << artifacts.report_csv.string() << '\n';
  return 0;
}

int cmd_report(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<survmult::MultiplicityReport> reports;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("report_", 0) == 0 && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw std::runtime_error("no report_*.csv files under " + path);
    }
    for (const auto& file : files) {
      auto loaded = survmult::read_report_csv(file);
      reports.insert(reports.end(), loaded.begin(), loaded.end());
    }
  } else {
    reports = survmult::read_report_csv(path);
  }
  std::cout << survmult::render_report_table(reports);
  return 0;
}

int cmd_simulate(const std::vector<std::string>& datasets, const std::string& out_dir,
                 std::uint64_t seed) {
  std::vector<CmapssSubset> subsets;
  if (datasets.empty()) {
    subsets = {CmapssSubset::kFD001, CmapssSubset::kFD002, CmapssSubset::kFD003,
               CmapssSubset::kFD004};
  } else {
    for (const auto& name : datasets) {
      const auto subset = survmult::cmapss_subset_from_string(name);
      if (!subset) {
        throw CLI::ValidationError("--dataset", "unknown subset: " + name);
      }
      subsets.push_back(*subset);
    }
  }
  for (CmapssSubset subset : subsets) {
    const auto path = survmult::write_synthetic_cmapss(out_dir, subset, seed);
    std::cout << to_string(subset) << " -> " << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "survmult: quantify predictive multiplicity of random survival forests\n"
      "on run-to-failure data (Rashomon sets; ambiguity, discrepancy, obscurity)"};
  app.require_subcommand(1);

  CliOverrides over;

  auto* ingest = app.add_subcommand(
      "ingest", "Parse raw telemetry and write the reformulated survival dataset");
  add_pipeline_options(ingest, over);

  auto* train = app.add_subcommand(
      "train", "Train the hyperparameter grid and write the prediction cube");
  add_pipeline_options(train, over);

  auto* analyze = app.add_subcommand(
      "analyze", "Compute multiplicity metrics and artifacts from a cube file");
  std::string cube_path;
  std::string dataset_id;
  analyze->add_option("--cube", cube_path, "Serialized prediction cube")->required();
  analyze->add_option("--dataset", dataset_id, "Dataset label for the outputs");
  analyze->add_option("--epsilon-grid", over.eps_grid, "Rashomon tolerances")
      ->delimiter(',');
  analyze->add_option("--delta-grid", over.delta_grid, "Conflict thresholds")
      ->delimiter(',');
  analyze->add_option("--out", over.out_dir, "Output directory");
  analyze->add_option("--threads", over.threads, "Worker threads");

  auto* sweep = app.add_subcommand(
      "sweep", "Full pipeline: ingest, train, analyze every configured subset");
  add_pipeline_options(sweep, over);

  auto* report = app.add_subcommand(
      "report", "Render report CSVs as a fixed-width table");
  std::string report_path;
  report->add_option("path", report_path, "report_*.csv file or directory")
      ->required();

  auto* simulate = app.add_subcommand(
      "simulate", "Write synthetic canonical-shaped telemetry files");
  std::vector<std::string> sim_datasets;
  std::string sim_out = "data";
  std::uint64_t sim_seed = 7;
  simulate->add_option("--dataset", sim_datasets, "Subset(s); default all four")
      ->delimiter(',');
  simulate->add_option("--out", sim_out, "Target directory");
  simulate->add_option("--seed", sim_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      return cmd_ingest(ingest, over);
    }
    if (train->parsed()) {
      return cmd_train(train, over);
    }
    if (analyze->parsed()) {
      return cmd_analyze(cube_path, dataset_id, analyze, over);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep, over);
    }
    if (report->parsed()) {
      return cmd_report(report_path);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_datasets, sim_out, sim_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
