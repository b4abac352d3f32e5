#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "survmult/dataset.hpp"
#include "survmult/forest.hpp"
#include "survmult/metrics.hpp"

namespace survmult {

// m x n matrix of risk predictions: entry (k, i) is model k's risk for
// observation i, evaluated at that observation's own recorded time (or at a
// common horizon when the cube was built in that mode). One performance
// score per model; reference_index is the best-performing model.
struct PredictionCube {
  std::size_t n_models = 0;
  std::size_t n_obs = 0;
  std::vector<double> risks;  // row-major, n_models x n_obs, entries in [0, 1]
  std::vector<PerformanceScore> performances;
  std::vector<std::string> model_ids;
  std::size_t reference_index = 0;
  // Companion concordance index per model for the dual-view reports; may be
  // empty when the producer did not supply it.
  std::vector<double> aux_c_index;

  double risk(std::size_t model, std::size_t obs) const {
    return risks[model * n_obs + obs];
  }

  // Throws std::domain_error when a structural invariant fails (shape,
  // entry range, reference not the argbest).
  void validate() const;
};

// Rashomon set for one tolerance: every member's performance is within
// epsilon of the reference's, under the score orientation. Always contains
// the reference; member indices ascend.
struct RashomonSelection {
  double epsilon = 0.0;
  std::vector<std::size_t> member_indices;
  double performance_bound = 0.0;
};

struct MultiplicityRow {
  double epsilon = 0.0;
  double delta = 0.0;
  double ambiguity = 0.0;
  double discrepancy = 0.0;
  double obscurity = 0.0;
  std::size_t rashomon_size = 0;
};

// Multiplicity metrics over an (epsilon, delta) grid, epsilon-major order.
struct MultiplicityReport {
  std::string dataset_id;
  std::vector<MultiplicityRow> rows;

  // Checks value ranges, non-increasing metrics within an epsilon group as
  // delta grows, and Rashomon sizes non-decreasing in epsilon. Throws
  // std::domain_error on violation.
  void validate() const;
};

// Index of the best score; ties break to the lowest index. Throws
// std::domain_error on empty input or mixed orientations.
std::size_t select_reference(std::span<const PerformanceScore> performances);

// Members whose performance is within epsilon of performances[reference]
// under the shared orientation. epsilon must be >= 0.
RashomonSelection rashomon_set(std::span<const PerformanceScore> performances,
                               std::size_t reference, double epsilon);

// Builds the cube by evaluating every model's risk at each observation's
// own time, or at eval_times[i] when a non-empty override is given.
// Prediction failures are rethrown annotated with (model, observation).
PredictionCube build_prediction_cube(std::span<const SurvivalForest> models,
                                     const SurvivalDataset& test,
                                     std::vector<PerformanceScore> performances,
                                     std::span<const double> eval_times = {});

// Fraction of observations whose reference risk estimate changes by at
// least delta under some Rashomon member. delta must lie in (0, 1).
double ambiguity(const PredictionCube& cube, const RashomonSelection& members,
                 double delta);

// Largest single-member fraction of observations deviating by at least
// delta from the reference.
double discrepancy(const PredictionCube& cube, const RashomonSelection& members,
                   double delta);

// Mean over observations of the fraction of members deviating by at least
// delta from the reference.
double obscurity(const PredictionCube& cube, const RashomonSelection& members,
                 double delta);

// One report row per (epsilon, delta) pair; membership is recomputed per
// epsilon. Epsilon values must lie in (0, 1] and delta values in (0, 1);
// both grids must be non-empty and sorted ascending.
MultiplicityReport sweep(const PredictionCube& cube, std::span<const double> eps_grid,
                         std::span<const double> delta_grid, std::string dataset_id,
                         std::size_t threads = 1);

}  // namespace survmult
