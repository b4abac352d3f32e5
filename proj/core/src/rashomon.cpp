#include "survmult/rashomon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "survmult/parallel.hpp"

namespace survmult {

void PredictionCube::validate() const {
  if (n_models == 0 || n_obs == 0) {
    throw std::domain_error("PredictionCube: at least one model and one observation");
  }
  if (risks.size() != n_models * n_obs) {
    throw std::domain_error("PredictionCube: risk matrix shape mismatch");
  }
  if (performances.size() != n_models || model_ids.size() != n_models) {
    throw std::domain_error("PredictionCube: one performance and id per model");
  }
  if (!aux_c_index.empty() && aux_c_index.size() != n_models) {
    throw std::domain_error("PredictionCube: companion metric shape mismatch");
  }
  for (double r : risks) {
    if (!(r >= 0.0) || !(r <= 1.0)) {
      throw std::domain_error("PredictionCube: risk entries must lie in [0, 1]");
    }
  }
  if (reference_index != select_reference(performances)) {
    throw std::domain_error("PredictionCube: reference is not the best-performing model");
  }
}

void MultiplicityReport::validate() const {
  for (const auto& row : rows) {
    for (double v : {row.ambiguity, row.discrepancy, row.obscurity}) {
      if (!(v >= 0.0) || !(v <= 1.0)) {
        throw std::domain_error("MultiplicityReport: metric values must lie in [0, 1]");
      }
    }
    if (row.rashomon_size < 1) {
      throw std::domain_error("MultiplicityReport: Rashomon set holds at least the reference");
    }
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1];
    const auto& cur = rows[i];
    if (cur.epsilon == prev.epsilon) {
      if (!(cur.delta > prev.delta)) {
        continue;
      }
      if (cur.ambiguity > prev.ambiguity || cur.discrepancy > prev.discrepancy ||
          cur.obscurity > prev.obscurity) {
        throw std::domain_error(
            "MultiplicityReport: metrics must not increase with delta at fixed epsilon");
      }
    } else if (cur.epsilon > prev.epsilon) {
      if (cur.rashomon_size < prev.rashomon_size) {
        throw std::domain_error(
            "MultiplicityReport: Rashomon size must not decrease with epsilon");
      }
    }
  }
}

std::size_t select_reference(std::span<const PerformanceScore> performances) {
  if (performances.empty()) {
    throw std::domain_error("select_reference: at least one score required");
  }
  const Orientation orientation = performances.front().orientation;
  std::size_t best = 0;
  for (std::size_t k = 1; k < performances.size(); ++k) {
    if (performances[k].orientation != orientation) {
      throw std::domain_error("select_reference: mixed score orientations");
    }
    const bool improves = orientation == Orientation::kLowerIsBetter
                              ? performances[k].value < performances[best].value
                              : performances[k].value > performances[best].value;
    if (improves) {
      best = k;
    }
  }
  return best;
}

RashomonSelection rashomon_set(std::span<const PerformanceScore> performances,
                               std::size_t reference, double epsilon) {
  if (reference >= performances.size()) {
    throw std::domain_error("rashomon_set: reference index out of range");
  }
  if (!(epsilon >= 0.0)) {
    throw std::domain_error("rashomon_set: epsilon must be non-negative");
  }
  const auto& ref = performances[reference];
  const double bound = ref.orientation == Orientation::kLowerIsBetter
                           ? ref.value + epsilon
                           : ref.value - epsilon;
  RashomonSelection out;
  out.epsilon = epsilon;
  out.performance_bound = bound;
  for (std::size_t k = 0; k < performances.size(); ++k) {
    if (performances[k].orientation != ref.orientation) {
      throw std::domain_error("rashomon_set: mixed score orientations");
    }
    const bool member = ref.orientation == Orientation::kLowerIsBetter
                            ? performances[k].value <= bound
                            : performances[k].value >= bound;
    if (member || k == reference) {
      out.member_indices.push_back(k);
    }
  }
  return out;
}

PredictionCube build_prediction_cube(std::span<const SurvivalForest> models,
                                     const SurvivalDataset& test,
                                     std::vector<PerformanceScore> performances,
                                     std::span<const double> eval_times) {
  if (models.empty()) {
    throw std::domain_error("build_prediction_cube: at least one model required");
  }
  if (performances.size() != models.size()) {
    throw std::domain_error("build_prediction_cube: one performance per model required");
  }
  if (!eval_times.empty() && eval_times.size() != test.n_rows()) {
    throw std::domain_error("build_prediction_cube: one evaluation time per observation");
  }

  PredictionCube cube;
  cube.n_models = models.size();
  cube.n_obs = test.n_rows();
  cube.risks.resize(cube.n_models * cube.n_obs);
  cube.performances = std::move(performances);
  cube.model_ids.reserve(models.size());
  for (const auto& model : models) {
    cube.model_ids.push_back(model.hyperparams().id());
  }

  for (std::size_t k = 0; k < models.size(); ++k) {
    for (std::size_t i = 0; i < test.n_rows(); ++i) {
      const double t = eval_times.empty() ? test.time(i) : eval_times[i];
      try {
        cube.risks[k * cube.n_obs + i] = models[k].predict_risk(test.row(i), t);
      } catch (const std::exception& e) {
        throw std::domain_error("prediction failed for model " + std::to_string(k) +
                                ", observation " + std::to_string(i) + ": " + e.what());
      }
    }
  }

  cube.reference_index = select_reference(cube.performances);
  return cube;
}

namespace {

void check_metric_inputs(const PredictionCube& cube, const RashomonSelection& members,
                         double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("multiplicity metric: delta must lie in (0, 1)");
  }
  if (members.member_indices.empty()) {
    throw std::domain_error("multiplicity metric: member set must be non-empty");
  }
  for (std::size_t k : members.member_indices) {
    if (k >= cube.n_models) {
      throw std::domain_error("multiplicity metric: member index out of range");
    }
  }
}

}  // namespace

double ambiguity(const PredictionCube& cube, const RashomonSelection& members,
                 double delta) {
  check_metric_inputs(cube, members, delta);
  const std::size_t ref = cube.reference_index;
  std::size_t conflicted = 0;
  for (std::size_t i = 0; i < cube.n_obs; ++i) {
    const double base = cube.risk(ref, i);
    for (std::size_t k : members.member_indices) {
      if (std::fabs(cube.risk(k, i) - base) >= delta) {
        ++conflicted;
        break;
      }
    }
  }
  return static_cast<double>(conflicted) / static_cast<double>(cube.n_obs);
}

double discrepancy(const PredictionCube& cube, const RashomonSelection& members,
                   double delta) {
  check_metric_inputs(cube, members, delta);
  const std::size_t ref = cube.reference_index;
  std::size_t worst = 0;
  for (std::size_t k : members.member_indices) {
    std::size_t conflicts = 0;
    for (std::size_t i = 0; i < cube.n_obs; ++i) {
      if (std::fabs(cube.risk(k, i) - cube.risk(ref, i)) >= delta) {
        ++conflicts;
      }
    }
    worst = std::max(worst, conflicts);
  }
  return static_cast<double>(worst) / static_cast<double>(cube.n_obs);
}

double obscurity(const PredictionCube& cube, const RashomonSelection& members,
                 double delta) {
  check_metric_inputs(cube, members, delta);
  const std::size_t ref = cube.reference_index;
  const double set_size = static_cast<double>(members.member_indices.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cube.n_obs; ++i) {
    const double base = cube.risk(ref, i);
    std::size_t conflicts = 0;
    for (std::size_t k : members.member_indices) {
      if (std::fabs(cube.risk(k, i) - base) >= delta) {
        ++conflicts;
      }
    }
    acc += static_cast<double>(conflicts) / set_size;
  }
  return acc / static_cast<double>(cube.n_obs);
}

MultiplicityReport sweep(const PredictionCube& cube, std::span<const double> eps_grid,
                         std::span<const double> delta_grid, std::string dataset_id,
                         std::size_t threads) {
  if (eps_grid.empty() || delta_grid.empty()) {
    throw std::domain_error("sweep: grids must be non-empty");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || !(eps_grid[i] <= 1.0)) {
      throw std::domain_error("sweep: epsilon values must lie in (0, 1]");
    }
    if (i > 0 && !(eps_grid[i - 1] < eps_grid[i])) {
      throw std::domain_error("sweep: epsilon grid must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0) || !(delta_grid[i] < 1.0)) {
      throw std::domain_error("sweep: delta values must lie in (0, 1)");
    }
    if (i > 0 && !(delta_grid[i - 1] < delta_grid[i])) {
      throw std::domain_error("sweep: delta grid must be strictly increasing");
    }
  }

  std::vector<RashomonSelection> selections;
  selections.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    selections.push_back(rashomon_set(cube.performances, cube.reference_index, eps));
  }

  MultiplicityReport report;
  report.dataset_id = std::move(dataset_id);
  report.rows.resize(eps_grid.size() * delta_grid.size());
  parallel_for(report.rows.size(), threads, [&](std::size_t cell) {
    const std::size_t e = cell / delta_grid.size();
    const std::size_t d = cell % delta_grid.size();
    const auto& members = selections[e];
    MultiplicityRow row;
    row.epsilon = eps_grid[e];
    row.delta = delta_grid[d];
    row.ambiguity = ambiguity(cube, members, delta_grid[d]);
    row.discrepancy = discrepancy(cube, members, delta_grid[d]);
    row.obscurity = obscurity(cube, members, delta_grid[d]);
    row.rashomon_size = members.member_indices.size();
    report.rows[cell] = row;
  });
  report.validate();
  return report;
}

}  // namespace survmult
