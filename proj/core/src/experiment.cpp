#include "survmult/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "survmult/cube_io.hpp"
#include "survmult/errors.hpp"
#include "survmult/estimators.hpp"
#include "survmult/forest_io.hpp"
#include "survmult/heatmap.hpp"
#include "survmult/parallel.hpp"
#include "survmult/rng.hpp"

namespace survmult {

namespace {

void check_grid_values(const std::vector<double>& grid, const char* name, bool allow_one) {
  if (grid.empty()) {
    throw std::domain_error(std::string(name) + " must be non-empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double hi_ok = allow_one ? grid[i] <= 1.0 : grid[i] < 1.0;
    if (!(grid[i] > 0.0) || !hi_ok) {
      throw std::domain_error(std::string(name) + " values must lie in (0, 1" +
                              (allow_one ? "]" : ")"));
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw std::domain_error(std::string(name) + " must be strictly increasing");
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (subsets.empty()) {
    throw std::domain_error("config: at least one subset required");
  }
  if (!(censor_time > 0.0)) {
    throw std::domain_error("config: censor_time must be positive");
  }
  if (feature_window == 0) {
    throw std::domain_error("config: feature_window must be positive");
  }
  if (!(split_ratio > 0.0) || !(split_ratio < 1.0)) {
    throw std::domain_error("config: split_ratio must lie in (0, 1)");
  }
  if (profile != "desk" && profile != "paper" && profile != "custom") {
    throw std::domain_error("config: profile must be desk, paper or custom");
  }
  if (grid.size() == 0) {
    throw std::domain_error("config: hyperparameter grid lists must be non-empty");
  }
  if (!(membership_horizon >= 0.0)) {
    throw std::domain_error("config: membership_horizon must be non-negative");
  }
  if (common_horizon_mode && !(common_horizon >= 0.0)) {
    throw std::domain_error("config: common_horizon must be non-negative");
  }
  check_grid_values(eps_grid, "config: eps_grid", /*allow_one=*/true);
  check_grid_values(delta_grid, "config: delta_grid", /*allow_one=*/false);
  if (!(constant_tolerance >= 0.0)) {
    throw std::domain_error("config: constant_tolerance must be non-negative");
  }
  if (ibs_grid_points == 0) {
    throw std::domain_error("config: ibs_grid_points must be positive");
  }
}

namespace {

using nlohmann::json;

json grid_to_json(const GridSpec& grid) {
  json j;
  j["ntree"] = grid.ntree;
  j["mtry"] = grid.mtry;
  j["nodesize"] = grid.nodesize;
  j["nodedepth"] = grid.nodedepth;
  std::vector<std::string> rules;
  rules.reserve(grid.splitrule.size());
  for (SplitRule rule : grid.splitrule) {
    rules.push_back(to_string(rule));
  }
  j["splitrule"] = rules;
  j["nsplit"] = grid.nsplit;
  return j;
}

GridSpec grid_from_json(const json& j) {
  GridSpec grid;
  grid.ntree = j.at("ntree").get<std::vector<std::size_t>>();
  grid.mtry = j.at("mtry").get<std::vector<std::size_t>>();
  grid.nodesize = j.at("nodesize").get<std::vector<std::size_t>>();
  grid.nodedepth = j.at("nodedepth").get<std::vector<std::size_t>>();
  for (const auto& name : j.at("splitrule").get<std::vector<std::string>>()) {
    const auto rule = split_rule_from_string(name);
    if (!rule) {
      throw std::invalid_argument("config: unknown splitrule: " + name);
    }
    grid.splitrule.push_back(*rule);
  }
  grid.nsplit = j.at("nsplit").get<std::vector<std::size_t>>();
  return grid;
}

constexpr const char* kKnownKeys[] = {
    "data_dir",        "subsets",           "censor_time",
    "feature_window",  "split_ratio",       "seed",
    "profile",         "grid",              "membership_metric",
    "membership_horizon", "common_horizon_mode", "common_horizon",
    "eps_grid",        "delta_grid",        "threads",
    "out_dir",         "constant_tolerance", "short_unit_policy",
    "ibs_grid_points", "save_models"};

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  json j;
  j["data_dir"] = config.data_dir.string();
  std::vector<std::string> subset_names;
  subset_names.reserve(config.subsets.size());
  for (CmapssSubset s : config.subsets) {
    subset_names.push_back(to_string(s));
  }
  j["subsets"] = subset_names;
  j["censor_time"] = config.censor_time;
  j["feature_window"] = config.feature_window;
  j["split_ratio"] = config.split_ratio;
  j["seed"] = config.seed;
  j["profile"] = config.profile;
  j["grid"] = grid_to_json(config.grid);
  j["membership_metric"] = to_string(config.membership_metric);
  j["membership_horizon"] = config.membership_horizon;
  j["common_horizon_mode"] = config.common_horizon_mode;
  j["common_horizon"] = config.common_horizon;
  j["eps_grid"] = config.eps_grid;
  j["delta_grid"] = config.delta_grid;
  j["threads"] = config.threads;
  j["out_dir"] = config.out_dir.string();
  j["constant_tolerance"] = config.constant_tolerance;
  j["short_unit_policy"] =
      config.short_unit_policy == ShortUnitPolicy::kSkipWithWarning ? "skip" : "error";
  j["ibs_grid_points"] = config.ibs_grid_points;
  j["save_models"] = config.save_models;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKnownKeys) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key: " + key);
    }
  }

  ExperimentConfig config;
  if (j.contains("data_dir")) {
    config.data_dir = j.at("data_dir").get<std::string>();
  }
  if (j.contains("subsets")) {
    config.subsets.clear();
    for (const auto& name : j.at("subsets").get<std::vector<std::string>>()) {
      const auto subset = cmapss_subset_from_string(name);
      if (!subset) {
        throw std::invalid_argument("config: unknown subset: " + name);
      }
      config.subsets.push_back(*subset);
    }
  }
  if (j.contains("censor_time")) {
    config.censor_time = j.at("censor_time").get<double>();
  }
  if (j.contains("feature_window")) {
    config.feature_window = j.at("feature_window").get<std::size_t>();
  }
  if (j.contains("split_ratio")) {
    config.split_ratio = j.at("split_ratio").get<double>();
  }
  if (j.contains("seed")) {
    config.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("profile")) {
    config.profile = j.at("profile").get<std::string>();
    if (config.profile != "desk" && config.profile != "paper" &&
        config.profile != "custom") {
      throw std::invalid_argument("config: profile must be desk, paper or custom");
    }
  }
  if (j.contains("grid")) {
    // An explicit grid wins; without a profile label it is a custom grid.
    config.grid = grid_from_json(j.at("grid"));
    if (!j.contains("profile")) {
      config.profile = "custom";
    }
  } else if (config.profile == "desk") {
    config.grid = desk_profile();
  } else if (config.profile == "paper") {
    config.grid = paper_profile();
  } else {
    throw std::invalid_argument("config: profile custom requires an explicit grid");
  }
  if (j.contains("membership_metric")) {
    const auto name = j.at("membership_metric").get<std::string>();
    const auto kind = metric_kind_from_string(name);
    if (!kind) {
      throw std::invalid_argument("config: unknown membership_metric: " + name);
    }
    config.membership_metric = *kind;
  }
  if (j.contains("membership_horizon")) {
    config.membership_horizon = j.at("membership_horizon").get<double>();
  } else if (j.contains("censor_time")) {
    config.membership_horizon = config.censor_time;
  }
  if (j.contains("common_horizon_mode")) {
    config.common_horizon_mode = j.at("common_horizon_mode").get<bool>();
  }
  if (j.contains("common_horizon")) {
    config.common_horizon = j.at("common_horizon").get<double>();
  } else if (j.contains("censor_time")) {
    config.common_horizon = config.censor_time;
  }
  if (j.contains("eps_grid")) {
    config.eps_grid = j.at("eps_grid").get<std::vector<double>>();
  }
  if (j.contains("delta_grid")) {
    config.delta_grid = j.at("delta_grid").get<std::vector<double>>();
  }
  if (j.contains("threads")) {
    config.threads = j.at("threads").get<std::size_t>();
  }
  if (j.contains("out_dir")) {
    config.out_dir = j.at("out_dir").get<std::string>();
  }
  if (j.contains("constant_tolerance")) {
    config.constant_tolerance = j.at("constant_tolerance").get<double>();
  }
  if (j.contains("short_unit_policy")) {
    const auto name = j.at("short_unit_policy").get<std::string>();
    if (name == "skip") {
      config.short_unit_policy = ShortUnitPolicy::kSkipWithWarning;
    } else if (name == "error") {
      config.short_unit_policy = ShortUnitPolicy::kError;
    } else {
      throw std::invalid_argument("config: short_unit_policy must be skip or error");
    }
  }
  if (j.contains("ibs_grid_points")) {
    config.ibs_grid_points = j.at("ibs_grid_points").get<std::size_t>();
  }
  if (j.contains("save_models")) {
    config.save_models = j.at("save_models").get<bool>();
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::string config_hash(const ExperimentConfig& config) {
  // The hash identifies the experiment, so location and scheduling knobs
  // (data_dir, out_dir, threads, save_models) are excluded: two runs of the
  // same experiment hash alike wherever they read and write.
  ExperimentConfig fingerprint = config;
  fingerprint.data_dir.clear();
  fingerprint.out_dir.clear();
  fingerprint.threads = 0;
  fingerprint.save_models = false;
  const std::string text = config_to_json(fingerprint);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

StepFunction risk_curve_from_chf(const StepFunction& chf) {
  std::vector<double> values;
  values.reserve(chf.jump_count());
  for (double h : chf.values()) {
    values.push_back(-std::expm1(-h));
  }
  return StepFunction(-std::expm1(-chf.initial_value()), chf.jump_times(),
                      std::move(values));
}

}  // namespace

PredictionCube train_and_score(const SurvivalDataset& train, const SurvivalDataset& test,
                               const ExperimentConfig& config,
                               std::vector<std::string>* warnings,
                               std::vector<SurvivalForest>* models_out) {
  auto filtered = filter_grid(build_model_grid(config.grid), train.n_features());
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), filtered.warnings.begin(),
                     filtered.warnings.end());
  }
  if (filtered.configs.empty()) {
    throw std::domain_error("train_and_score: every grid configuration was filtered out");
  }
  const auto& configs = filtered.configs;
  const std::size_t m = configs.size();
  const std::size_t n = test.n_rows();

  const StepFunction censor_curve =
      reverse_km_censoring(train.times(), train.events());
  const double horizon = config.membership_horizon;

  PredictionCube cube;
  cube.n_models = m;
  cube.n_obs = n;
  cube.risks.resize(m * n);
  cube.performances.resize(m);
  cube.model_ids.resize(m);
  cube.aux_c_index.assign(m, std::nan(""));
  std::vector<std::string> model_warnings(m);
  std::vector<std::unique_ptr<SurvivalForest>> retained(models_out != nullptr ? m : 0);

  parallel_for(m, config.threads, [&](std::size_t k) {
    const HyperParams& hp = configs[k];
    const std::uint64_t model_seed = mix_seed(config.seed, k);
    SurvivalForest forest = fit_forest(train, hp, model_seed);

    std::vector<double> risks_at_horizon(n);
    std::vector<StepFunction> risk_curves;
    const bool need_curves = config.membership_metric == MetricKind::kIntegratedBrier;
    if (need_curves) {
      risk_curves.reserve(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const StepFunction chf = forest.predict_chf(test.row(i));
      const double eval_time = config.common_horizon_mode ? config.common_horizon
                                                          : test.time(i);
      cube.risks[k * n + i] = risk_from_chf(chf, eval_time);
      risks_at_horizon[i] = risk_from_chf(chf, horizon);
      if (need_curves) {
        risk_curves.push_back(risk_curve_from_chf(chf));
      }
    }

    switch (config.membership_metric) {
      case MetricKind::kBrierAtT:
        cube.performances[k] = PerformanceScore::brier_at(
            brier_score(risks_at_horizon, test, horizon, censor_curve), horizon);
        break;
      case MetricKind::kIntegratedBrier:
        cube.performances[k] = PerformanceScore::integrated_brier(
            integrated_brier(risk_curves, test, censor_curve, horizon,
                             config.ibs_grid_points),
            horizon);
        break;
      case MetricKind::kCIndex:
        cube.performances[k] =
            PerformanceScore::c_index(c_index(risks_at_horizon, test));
        break;
    }

    if (config.membership_metric == MetricKind::kCIndex) {
      cube.aux_c_index[k] = cube.performances[k].value;
    } else {
      try {
        cube.aux_c_index[k] = c_index(risks_at_horizon, test);
      } catch (const std::domain_error& e) {
        model_warnings[k] = std::string("c-index unavailable for model ") +
                            std::to_string(k) + ": " + e.what();
      }
    }
    cube.model_ids[k] = hp.id();
    if (models_out != nullptr) {
      retained[k] = std::make_unique<SurvivalForest>(std::move(forest));
    }
  });

  if (models_out != nullptr) {
    models_out->clear();
    models_out->reserve(m);
    for (auto& forest : retained) {
      models_out->push_back(std::move(*forest));
    }
  }
  if (warnings != nullptr) {
    for (const auto& w : model_warnings) {
      if (!w.empty()) {
        warnings->push_back(w);
      }
    }
  }
  cube.reference_index = select_reference(cube.performances);
  cube.validate();
  return cube;
}

SubsetArtifacts analyze_cube(const PredictionCube& cube, const std::string& dataset_id,
                             std::span<const double> eps_grid,
                             std::span<const double> delta_grid,
                             const std::filesystem::path& out_dir,
                             const std::string& hash, std::size_t threads) {
  std::filesystem::create_directories(out_dir);

  SubsetArtifacts artifacts;
  artifacts.report = sweep(cube, eps_grid, delta_grid, dataset_id, threads);
  artifacts.rashomon_rows = rashomon_characteristics(cube, eps_grid);

  artifacts.report_csv = out_dir / ("report_" + dataset_id + ".csv");
  write_report_csv(artifacts.report_csv, artifacts.report, hash);

  artifacts.rashomon_csv = out_dir / ("rashomon_" + dataset_id + ".csv");
  write_rashomon_csv(artifacts.rashomon_csv, dataset_id, artifacts.rashomon_rows, hash);

  const struct {
    const char* name;
    double MultiplicityRow::*field;
  } metrics[] = {{"ambiguity", &MultiplicityRow::ambiguity},
                 {"discrepancy", &MultiplicityRow::discrepancy},
                 {"obscurity", &MultiplicityRow::obscurity}};
  for (const auto& metric : metrics) {
    std::vector<double> values;
    values.reserve(artifacts.report.rows.size());
    for (const auto& row : artifacts.report.rows) {
      values.push_back(row.*(metric.field));
    }
    const auto path =
        out_dir / ("heatmap_" + dataset_id + "_" + metric.name + ".svg");
    write_heatmap_svg(path, dataset_id + std::string(" ") + metric.name, eps_grid,
                      delta_grid, values, hash);
    artifacts.heatmaps.push_back(path);
  }
  return artifacts;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  const std::string hash = config_hash(config);

  {
    std::ofstream out(config.out_dir / "config_resolved.json");
    if (!out) {
      throw std::runtime_error("cannot write resolved config");
    }
    out << config_to_json(config);
  }

  ExperimentResult result;
  std::vector<std::string> failures;

  for (CmapssSubset subset : config.subsets) {
    const std::string name = to_string(subset);
    try {
      const auto raw_path = config.data_dir / ("train_" + name + ".txt");
      const RawTelemetry raw = parse_cmapss(raw_path, subset);

      std::vector<std::string> warnings;
      const SurvivalDataset full =
          to_survival(raw, {config.censor_time}, config.feature_window,
                      config.short_unit_policy, &warnings);
      auto [train, test] = split_train_test(full, config.split_ratio, config.seed);

      const auto columns = find_constant_features(train, config.constant_tolerance);
      if (columns.kept.empty()) {
        throw std::domain_error("every feature column is constant on the train split");
      }
      if (!columns.removed.empty()) {
        std::string note = "dropped constant columns:";
        for (const auto& c : columns.removed) {
          note += ' ' + c;
        }
        warnings.push_back(note);
      }
      const SurvivalDataset train_kept = train.select_features(columns.kept);
      const SurvivalDataset test_kept = test.select_features(columns.kept);

      std::vector<SurvivalForest> models;
      PredictionCube cube =
          train_and_score(train_kept, test_kept, config, &warnings,
                          config.save_models ? &models : nullptr);

      SubsetArtifacts artifacts =
          analyze_cube(cube, name, config.eps_grid, config.delta_grid, config.out_dir,
                       hash, config.threads);
      artifacts.subset = subset;
      artifacts.warnings = std::move(warnings);

      write_survival_csv(config.out_dir / ("survival_" + name + ".csv"), full, hash);
      artifacts.cube_file = config.out_dir / ("cube_" + name + ".cube");
      write_cube(artifacts.cube_file, cube, hash);

      if (config.save_models) {
        const auto model_dir = config.out_dir / "models" / name;
        std::filesystem::create_directories(model_dir);
        for (std::size_t k = 0; k < models.size(); ++k) {
          char file[32];
          std::snprintf(file, sizeof(file), "model_%05zu.forest", k);
          save_forest(model_dir / file, models[k]);
        }
      }

      result.subsets.push_back(std::move(artifacts));
    } catch (const std::exception& e) {
      // Partial outputs for this subset are marked by the FAILED file; the
      // remaining subsets still run.
      std::ofstream marker(config.out_dir / ("FAILED_" + name + ".txt"));
      marker << e.what() << '\n';
      failures.push_back(name + ": " + e.what());
    }
  }

  if (!failures.empty()) {
    std::string message = "run_experiment: failed subsets:";
    for (const auto& f : failures) {
      message += "\n  " + f;
    }
    throw std::runtime_error(message);
  }
  return result;
}

}  // namespace survmult
