#include "survmult/grid.hpp"

#include <stdexcept>

namespace survmult {

GridSpec paper_profile() {
  GridSpec spec;
  for (std::size_t v = 100; v <= 1900; v += 200) {
    spec.ntree.push_back(v);
  }
  for (std::size_t v = 1; v <= 9; v += 2) {
    spec.mtry.push_back(v);
  }
  for (std::size_t v = 5; v <= 85; v += 20) {
    spec.nodesize.push_back(v);
  }
  for (std::size_t v = 5; v <= 85; v += 20) {
    spec.nodedepth.push_back(v);
  }
  spec.splitrule = {SplitRule::kLogRank, SplitRule::kLogRankScore};
  for (std::size_t v = 5; v <= 15; v += 2) {
    spec.nsplit.push_back(v);
  }
  return spec;
}

GridSpec desk_profile() {
  GridSpec spec;
  spec.ntree = {25, 50};
  spec.mtry = {3, 6};
  spec.nodesize = {5};
  spec.nodedepth = {5};
  spec.splitrule = {SplitRule::kLogRank};
  spec.nsplit = {5};
  return spec;
}

std::vector<HyperParams> build_model_grid(const GridSpec& spec) {
  if (spec.ntree.empty() || spec.mtry.empty() || spec.nodesize.empty() ||
      spec.nodedepth.empty() || spec.splitrule.empty() || spec.nsplit.empty()) {
    throw std::domain_error("build_model_grid: every hyperparameter list must be non-empty");
  }
  std::vector<HyperParams> grid;
  grid.reserve(spec.size());
  for (std::size_t ntree : spec.ntree) {
    for (std::size_t mtry : spec.mtry) {
      for (std::size_t nodesize : spec.nodesize) {
        for (std::size_t nodedepth : spec.nodedepth) {
          for (SplitRule rule : spec.splitrule) {
            for (std::size_t nsplit : spec.nsplit) {
              grid.push_back({ntree, mtry, nodesize, nodedepth, rule, nsplit});
            }
          }
        }
      }
    }
  }
  return grid;
}

GridFilterResult filter_grid(const std::vector<HyperParams>& grid,
                             std::size_t n_features) {
  GridFilterResult out;
  out.configs.reserve(grid.size());
  for (const auto& hp : grid) {
    if (hp.mtry > n_features) {
      out.warnings.push_back("dropped " + hp.id() + ": mtry exceeds the " +
                             std::to_string(n_features) + " available features");
    } else {
      out.configs.push_back(hp);
    }
  }
  return out;
}

}  // namespace survmult
