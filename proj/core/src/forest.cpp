#include "survmult/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "survmult/estimators.hpp"
#include "survmult/parallel.hpp"
#include "survmult/splits.hpp"

namespace survmult {

std::string to_string(SplitRule rule) {
  switch (rule) {
    case SplitRule::kLogRank:
      return "logrank";
    case SplitRule::kLogRankScore:
      return "logrankscore";
  }
  return "logrank";
}

std::optional<SplitRule> split_rule_from_string(std::string_view name) {
  if (name == "logrank") {
    return SplitRule::kLogRank;
  }
  if (name == "logrankscore") {
    return SplitRule::kLogRankScore;
  }
  return std::nullopt;
}

void HyperParams::validate(std::size_t n_features) const {
  if (ntree == 0 || mtry == 0 || nodesize == 0 || nodedepth == 0 || nsplit == 0) {
    throw std::domain_error("HyperParams: all fields must be positive");
  }
  if (mtry > n_features) {
    throw std::domain_error("HyperParams: mtry exceeds the feature count");
  }
}

std::string HyperParams::id() const {
  std::string out;
  out += "ntree=" + std::to_string(ntree);
  out += ",mtry=" + std::to_string(mtry);
  out += ",nodesize=" + std::to_string(nodesize);
  out += ",nodedepth=" + std::to_string(nodedepth);
  out += ",splitrule=" + to_string(splitrule);
  out += ",nsplit=" + std::to_string(nsplit);
  return out;
}

SurvivalTree::SurvivalTree(std::vector<Node> nodes, std::vector<Leaf> leaves,
                           std::size_t depth)
    : nodes_(std::move(nodes)), leaves_(std::move(leaves)), depth_(depth) {
  if (nodes_.empty() || leaves_.empty()) {
    throw std::domain_error("SurvivalTree: at least one node and one leaf required");
  }
}

const SurvivalTree::Leaf& SurvivalTree::leaf_for(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes_[node].leaf < 0) {
    const auto& n = nodes_[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return leaves_[static_cast<std::size_t>(nodes_[node].leaf)];
}

namespace {

struct TreeBuilder {
  const SurvivalDataset& data;
  const HyperParams& hp;
  Rng& rng;
  std::vector<SurvivalTree::Node> nodes;
  std::vector<SurvivalTree::Leaf> leaves;
  std::size_t max_depth = 0;

  double split_statistic(const SurvivalGroup& left, const SurvivalGroup& right) const {
    return hp.splitrule == SplitRule::kLogRank ? logrank_stat(left, right)
                                               : logrank_score_stat(left, right);
  }

  std::size_t make_leaf(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::vector<double> times;
    std::vector<std::uint8_t> events;
    times.reserve(rows.size());
    events.reserve(rows.size());
    for (std::size_t r : rows) {
      times.push_back(data.time(r));
      events.push_back(data.event(r) ? 1 : 0);
    }
    leaves.push_back({rows.size(), na_cumhaz(times, events)});
    nodes.push_back({});
    nodes.back().leaf = static_cast<std::int64_t>(leaves.size() - 1);
    max_depth = std::max(max_depth, depth);
    return nodes.size() - 1;
  }

  struct BestSplit {
    double statistic = 0.0;
    std::size_t feature = 0;
    double threshold = 0.0;
  };

  // Best (feature, threshold) over mtry drawn features and nsplit random
  // thresholds each; candidates leaving either child below nodesize are
  // skipped. Returns nullopt when no candidate has a positive statistic.
  // TODO: share per-node death counts across the nsplit candidates instead
  // of re-tabulating both groups per threshold; matters for paper-scale
  // grids, not desk runs.
  std::optional<BestSplit> find_split(const std::vector<std::size_t>& rows) {
    const auto features = rng.sample_without_replacement(data.n_features(), hp.mtry);
    BestSplit best;
    bool found = false;

    std::vector<double> left_times;
    std::vector<std::uint8_t> left_events;
    std::vector<double> right_times;
    std::vector<std::uint8_t> right_events;

    for (std::size_t f : features) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t r : rows) {
        lo = std::min(lo, data.feature(r, f));
        hi = std::max(hi, data.feature(r, f));
      }
      if (!(lo < hi)) {
        continue;  // constant in this node
      }
      std::vector<double> thresholds;
      thresholds.reserve(hp.nsplit);
      for (std::size_t s = 0; s < hp.nsplit; ++s) {
        thresholds.push_back(rng.uniform(lo, hi));
      }
      std::sort(thresholds.begin(), thresholds.end());
      thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                       thresholds.end());

      for (double c : thresholds) {
        left_times.clear();
        left_events.clear();
        right_times.clear();
        right_events.clear();
        for (std::size_t r : rows) {
          if (data.feature(r, f) <= c) {
            left_times.push_back(data.time(r));
            left_events.push_back(data.event(r) ? 1 : 0);
          } else {
            right_times.push_back(data.time(r));
            right_events.push_back(data.event(r) ? 1 : 0);
          }
        }
        if (left_times.size() < hp.nodesize || right_times.size() < hp.nodesize) {
          continue;
        }
        const double stat = split_statistic({left_times, left_events},
                                            {right_times, right_events});
        if (stat > best.statistic) {
          best = {stat, f, c};
          found = true;
        }
      }
    }
    if (!found || !(best.statistic > 0.0)) {
      return std::nullopt;
    }
    return best;
  }

  std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    if (depth >= hp.nodedepth || rows.size() < 2 * hp.nodesize) {
      return make_leaf(rows, depth);
    }
    const auto split = find_split(rows);
    if (!split) {
      return make_leaf(rows, depth);
    }
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      if (data.feature(r, split->feature) <= split->threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    const std::size_t self = nodes.size();
    nodes.push_back({});
    nodes[self].feature = split->feature;
    nodes[self].threshold = split->threshold;
    const std::size_t left = grow(left_rows, depth + 1);
    const std::size_t right = grow(right_rows, depth + 1);
    nodes[self].left = left;
    nodes[self].right = right;
    return self;
  }
};

}  // namespace

SurvivalTree fit_tree(const SurvivalDataset& data, std::span<const std::size_t> rows,
                      const HyperParams& hp, Rng& rng) {
  hp.validate(data.n_features());
  if (rows.empty()) {
    throw std::domain_error("fit_tree: at least one training row required");
  }
  TreeBuilder builder{data, hp, rng, {}, {}, 0};
  std::vector<std::size_t> all(rows.begin(), rows.end());
  builder.grow(all, 0);
  return SurvivalTree(std::move(builder.nodes), std::move(builder.leaves),
                      builder.max_depth);
}

SurvivalTree fit_tree(const SurvivalDataset& data, const HyperParams& hp, Rng& rng) {
  std::vector<std::size_t> rows(data.n_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = i;
  }
  return fit_tree(data, rows, hp, rng);
}

SurvivalForest::SurvivalForest(std::vector<SurvivalTree> trees, HyperParams hyperparams,
                               std::uint64_t seed, std::vector<double> event_time_grid,
                               std::size_t n_features)
    : trees_(std::move(trees)),
      hyperparams_(std::move(hyperparams)),
      seed_(seed),
      event_time_grid_(std::move(event_time_grid)),
      n_features_(n_features) {
  if (trees_.empty()) {
    throw std::domain_error("SurvivalForest: at least one tree required");
  }
  for (std::size_t i = 1; i < event_time_grid_.size(); ++i) {
    if (!(event_time_grid_[i - 1] < event_time_grid_[i])) {
      throw std::domain_error("SurvivalForest: event-time grid must be strictly increasing");
    }
  }
}

StepFunction SurvivalForest::predict_chf(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::domain_error("predict_chf: feature-dimension mismatch");
  }
  std::vector<double> sums(event_time_grid_.size(), 0.0);
  for (const auto& tree : trees_) {
    const auto& chf = tree.leaf_for(x).chf;
    // Merge walk: leaf jump times are a subset of the training event times.
    const auto& jumps = chf.jump_times();
    const auto& vals = chf.values();
    double current = chf.initial_value();
    std::size_t j = 0;
    for (std::size_t g = 0; g < event_time_grid_.size(); ++g) {
      while (j < jumps.size() && jumps[j] <= event_time_grid_[g]) {
        current = vals[j];
        ++j;
      }
      sums[g] += current;
    }
  }
  const double inv = 1.0 / static_cast<double>(trees_.size());
  for (double& v : sums) {
    v *= inv;
  }
  return StepFunction(0.0, event_time_grid_, std::move(sums));
}

double SurvivalForest::predict_risk(std::span<const double> x, double t) const {
  return risk_from_chf(predict_chf(x), t);
}

SurvivalForest fit_forest(const SurvivalDataset& data, const HyperParams& hp,
                          std::uint64_t seed, const FitOptions& options) {
  hp.validate(data.n_features());

  std::vector<double> grid;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    if (data.event(i)) {
      grid.push_back(data.time(i));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t n = data.n_rows();
  SurvivalTree::Node placeholder_node;
  placeholder_node.leaf = 0;
  std::vector<SurvivalTree> trees(
      hp.ntree, SurvivalTree({placeholder_node}, {SurvivalTree::Leaf{}}, 0));
  parallel_for(hp.ntree, options.threads, [&](std::size_t k) {
    Rng rng = Rng::stream(seed, k);
    std::vector<std::size_t> rows(n);
    if (options.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        rows[i] = rng.below(n);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        rows[i] = i;
      }
    }
    trees[k] = fit_tree(data, rows, hp, rng);
  });

  return SurvivalForest(std::move(trees), hp, seed, std::move(grid),
                        data.n_features());
}

}  // namespace survmult
