#pragma once

#include <string>
#include <vector>

#include "survmult/forest.hpp"

namespace survmult {

// Hyperparameter value lists whose Cartesian product forms the model grid.
struct GridSpec {
  std::vector<std::size_t> ntree;
  std::vector<std::size_t> mtry;
  std::vector<std::size_t> nodesize;
  std::vector<std::size_t> nodedepth;
  std::vector<SplitRule> splitrule;
  std::vector<std::size_t> nsplit;

  std::size_t size() const {
    return ntree.size() * mtry.size() * nodesize.size() * nodedepth.size() *
           splitrule.size() * nsplit.size();
  }

  bool operator==(const GridSpec&) const = default;
};

// Full-scale grid: 10 x 5 x 5 x 5 x 2 x 6 = 15,000 configurations.
GridSpec paper_profile();

// Reduced grid for desk-scale runs: 2 x 2 x 1 x 1 x 1 x 1 = 4 configurations.
GridSpec desk_profile();

// Cartesian product in lexicographic field order (ntree outermost, nsplit
// innermost). Throws std::domain_error when any list is empty.
std::vector<HyperParams> build_model_grid(const GridSpec& spec);

// Drops configurations invalid for the given feature count (mtry > d); one
// warning per dropped configuration.
struct GridFilterResult {
  std::vector<HyperParams> configs;
  std::vector<std::string> warnings;
};

GridFilterResult filter_grid(const std::vector<HyperParams>& grid,
                             std::size_t n_features);

}  // namespace survmult
