#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "survmult/dataset.hpp"
#include "survmult/rng.hpp"
#include "survmult/step_function.hpp"

namespace survmult {

enum class SplitRule { kLogRank, kLogRankScore };

std::string to_string(SplitRule rule);
std::optional<SplitRule> split_rule_from_string(std::string_view name);

// Hyperparameter surface of a random survival forest.
struct HyperParams {
  std::size_t ntree = 100;     // trees in the forest
  std::size_t mtry = 3;        // features drawn per node
  std::size_t nodesize = 5;    // minimum observations in any leaf
  std::size_t nodedepth = 5;   // maximum tree depth (root is depth 0)
  SplitRule splitrule = SplitRule::kLogRank;
  std::size_t nsplit = 5;      // random candidate thresholds per feature

  // Throws std::domain_error when a field is zero or mtry exceeds the
  // feature count.
  void validate(std::size_t n_features) const;

  // Canonical space-free label, e.g.
  // "ntree=100,mtry=3,nodesize=5,nodedepth=5,splitrule=logrank,nsplit=5".
  std::string id() const;

  bool operator==(const HyperParams&) const = default;
};

// A single survival tree. Internal nodes route on feature <= threshold;
// leaves carry the Nelson-Aalen cumulative hazard of their training members
// together with the member count.
class SurvivalTree {
public:
  struct Node {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::int64_t leaf = -1;  // >= 0: index into leaves()

    bool operator==(const Node&) const = default;
  };
  struct Leaf {
    std::size_t member_count = 0;
    StepFunction chf = StepFunction::constant(0.0);

    bool operator==(const Leaf&) const = default;
  };

  SurvivalTree(std::vector<Node> nodes, std::vector<Leaf> leaves, std::size_t depth);

  const Leaf& leaf_for(std::span<const double> x) const;

  std::size_t depth() const noexcept { return depth_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Leaf>& leaves() const noexcept { return leaves_; }

  bool operator==(const SurvivalTree&) const = default;

private:
  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
  std::size_t depth_;
};

// Trained ensemble. Immutable and safe to share across threads.
class SurvivalForest {
public:
  SurvivalForest(std::vector<SurvivalTree> trees, HyperParams hyperparams,
                 std::uint64_t seed, std::vector<double> event_time_grid,
                 std::size_t n_features);

  // Pointwise arithmetic mean of the per-tree leaf cumulative hazards,
  // evaluated on the training event-time grid. Throws std::domain_error on
  // a feature-dimension mismatch.
  StepFunction predict_chf(std::span<const double> x) const;

  // Risk of failure by time t: 1 - exp(-H(t)) of the ensemble hazard.
  double predict_risk(std::span<const double> x, double t) const;

  const std::vector<SurvivalTree>& trees() const noexcept { return trees_; }
  const HyperParams& hyperparams() const noexcept { return hyperparams_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<double>& event_time_grid() const noexcept { return event_time_grid_; }
  std::size_t n_features() const noexcept { return n_features_; }

  bool operator==(const SurvivalForest&) const = default;

private:
  std::vector<SurvivalTree> trees_;
  HyperParams hyperparams_;
  std::uint64_t seed_;
  std::vector<double> event_time_grid_;  // strictly increasing
  std::size_t n_features_;
};

struct FitOptions {
  bool bootstrap = true;     // test hook: false trains every tree on the full data
  std::size_t threads = 1;   // trees trained concurrently; output is identical
};

// Grows one survival tree on the given rows of `data` (indices may repeat).
// At each node, hp.mtry features are drawn without replacement and hp.nsplit
// candidate thresholds per feature are drawn uniformly over the node-local
// feature range; the candidate maximizing the split statistic wins. A node
// becomes a leaf when it reaches hp.nodedepth, holds fewer than 2*nodesize
// members, or no candidate has a positive statistic.
SurvivalTree fit_tree(const SurvivalDataset& data, const HyperParams& hp, Rng& rng);
SurvivalTree fit_tree(const SurvivalDataset& data, std::span<const std::size_t> rows,
                      const HyperParams& hp, Rng& rng);

// Trains hp.ntree trees on independent size-n bootstrap resamples. Tree k
// draws from Rng::stream(seed, k), so training is reproducible bit-for-bit
// regardless of thread count.
SurvivalForest fit_forest(const SurvivalDataset& data, const HyperParams& hp,
                          std::uint64_t seed, const FitOptions& options = {});

}  // namespace survmult
