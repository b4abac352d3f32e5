#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "survmult/errors.hpp"
#include "survmult/estimators.hpp"
#include "survmult/forest.hpp"
#include "survmult/forest_io.hpp"
#include "support/oracles.hpp"

using survmult::fit_forest;
using survmult::fit_tree;
using survmult::HyperParams;
using survmult::na_cumhaz;
using survmult::Rng;
using survmult::SplitRule;
using survmult::StepFunction;
using survmult::SurvivalDataset;
using survmult::SurvivalForest;
using survmult::SurvivalTree;

namespace {

SurvivalDataset constant_feature_data(std::size_t n) {
  std::vector<double> features(n, 1.0);
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  for (std::size_t i = 0; i < n; ++i) {
    times.push_back(static_cast<double>(i % 7 + 1));
    events.push_back(i % 3 == 0 ? 0 : 1);
  }
  return SurvivalDataset(std::move(features), 1, std::move(times), std::move(events),
                         {"x0"});
}

// One binary feature separating two survival regimes.
SurvivalDataset separable_data(std::size_t per_group) {
  std::vector<double> features;
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  for (std::size_t i = 0; i < per_group; ++i) {
    features.push_back(0.0);
    times.push_back(2.0 + static_cast<double>(i % 4));
    events.push_back(1);
  }
  for (std::size_t i = 0; i < per_group; ++i) {
    features.push_back(1.0);
    times.push_back(30.0 + static_cast<double>(i % 5));
    events.push_back(i % 4 == 0 ? 0 : 1);
  }
  return SurvivalDataset(std::move(features), 1, std::move(times), std::move(events),
                         {"x0"});
}

std::vector<double> group_times(const SurvivalDataset& data, double feature_value) {
  std::vector<double> out;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    if (data.feature(i, 0) == feature_value) {
      out.push_back(data.time(i));
    }
  }
  return out;
}

std::vector<std::uint8_t> group_events(const SurvivalDataset& data, double feature_value) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    if (data.feature(i, 0) == feature_value) {
      out.push_back(data.event(i) ? 1 : 0);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  CHECK_NOTHROW(hp.validate(3));
  hp.mtry = 4;
  CHECK_THROWS_AS(hp.validate(3), std::domain_error);
  hp = HyperParams{};
  hp.ntree = 0;
  CHECK_THROWS_AS(hp.validate(3), std::domain_error);
  CHECK(HyperParams{}.id() ==
        "ntree=100,mtry=3,nodesize=5,nodedepth=5,splitrule=logrank,nsplit=5");
}

TEST_CASE("identical features grow a single leaf carrying the pooled hazard") {
  const auto data = constant_feature_data(20);
  HyperParams hp{1, 1, 2, 4, SplitRule::kLogRank, 5};
  Rng rng(7);
  const auto tree = fit_tree(data, hp, rng);
  REQUIRE(tree.leaves().size() == 1);
  CHECK(tree.depth() == 0);
  CHECK(tree.leaves()[0].member_count == 20);
  CHECK(tree.leaves()[0].chf == na_cumhaz(data.times(), data.events()));
}

TEST_CASE("a perfectly separating feature reproduces group-wise hazards") {
  const auto data = separable_data(10);
  HyperParams hp{1, 1, 3, 4, SplitRule::kLogRank, 7};
  Rng rng(11);
  const auto tree = fit_tree(data, hp, rng);
  REQUIRE(tree.leaves().size() == 2);
  CHECK(tree.depth() == 1);

  const auto left_chf = na_cumhaz(group_times(data, 0.0), group_events(data, 0.0));
  const auto right_chf = na_cumhaz(group_times(data, 1.0), group_events(data, 1.0));
  const auto& leaf_low = tree.leaf_for(std::vector<double>{0.0});
  const auto& leaf_high = tree.leaf_for(std::vector<double>{1.0});
  CHECK(leaf_low.member_count == 10);
  CHECK(leaf_high.member_count == 10);
  for (double t = 0.0; t <= 40.0; t += 1.0) {
    CHECK(leaf_low.chf(t) == doctest::Approx(left_chf(t)).epsilon(1e-12));
    CHECK(leaf_high.chf(t) == doctest::Approx(right_chf(t)).epsilon(1e-12));
  }
}

TEST_CASE("nodedepth of one binds regardless of the data") {
  Rng data_rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const auto data = oracles::random_dataset(data_rng, 40, 3);
    HyperParams hp{1, 2, 2, 1, SplitRule::kLogRank, 5};
    Rng rng(rep);
    const auto tree = fit_tree(data, hp, rng);
    CHECK(tree.depth() <= 1);
  }
}

TEST_CASE("structural invariants hold on random datasets") {
  Rng data_rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const auto data = oracles::random_dataset(data_rng, 30 + data_rng.below(40), 4);
    HyperParams hp{3, 2, 3 + data_rng.below(4), 1 + data_rng.below(5),
                   rep % 2 == 0 ? SplitRule::kLogRank : SplitRule::kLogRankScore,
                   1 + data_rng.below(8)};
    const auto forest = fit_forest(data, hp, 1000 + rep);
    CHECK(forest.trees().size() == hp.ntree);
    for (const auto& tree : forest.trees()) {
      CHECK(tree.depth() <= hp.nodedepth);
      for (const auto& leaf : tree.leaves()) {
        CHECK(leaf.member_count >= hp.nodesize);
        // Every leaf hazard is a valid CHF.
        CHECK(leaf.chf.initial_value() == 0.0);
        double prev = 0.0;
        for (double v : leaf.chf.values()) {
          CHECK(v >= prev);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("an ensemble of one tree without bootstrap equals fit_tree") {
  Rng data_rng(19);
  const auto data = oracles::random_dataset(data_rng, 50, 3);
  HyperParams hp{1, 2, 4, 3, SplitRule::kLogRank, 5};

  const auto forest = fit_forest(data, hp, 99, {.bootstrap = false});
  Rng rng = Rng::stream(99, 0);
  const auto tree = fit_tree(data, hp, rng);
  REQUIRE(forest.trees().size() == 1);
  CHECK(forest.trees()[0] == tree);
}

TEST_CASE("same seed reproduces the forest bit-for-bit, different seeds may differ") {
  Rng data_rng(23);
  const auto data = oracles::random_dataset(data_rng, 60, 4);
  HyperParams hp{5, 2, 4, 4, SplitRule::kLogRank, 5};

  const auto a = fit_forest(data, hp, 424242);
  const auto b = fit_forest(data, hp, 424242);
  CHECK(a == b);

  Rng probe_rng(29);
  const auto probe = oracles::random_dataset(probe_rng, 10, 4);
  for (std::size_t i = 0; i < probe.n_rows(); ++i) {
    CHECK(a.predict_chf(probe.row(i)) == b.predict_chf(probe.row(i)));
  }

  const auto c = fit_forest(data, hp, 424243);
  bool any_difference = false;
  for (std::size_t i = 0; i < probe.n_rows() && !any_difference; ++i) {
    any_difference = !(a.predict_chf(probe.row(i)) == c.predict_chf(probe.row(i)));
  }
  CHECK(any_difference);
}

TEST_CASE("parallel training matches serial training") {
  Rng data_rng(31);
  const auto data = oracles::random_dataset(data_rng, 60, 4);
  HyperParams hp{8, 2, 4, 4, SplitRule::kLogRankScore, 5};
  const auto serial = fit_forest(data, hp, 7, {.threads = 1});
  const auto parallel = fit_forest(data, hp, 7, {.threads = 4});
  CHECK(serial == parallel);
}

TEST_CASE("ensemble prediction is the mean of the per-tree hazards") {
  // Two hand-built single-leaf trees with known hazards.
  SurvivalTree::Node leaf_node;
  leaf_node.leaf = 0;
  const StepFunction h1(0.0, {1.0, 3.0}, {0.2, 0.6});
  const StepFunction h2(0.0, {2.0, 3.0}, {0.4, 1.0});
  std::vector<SurvivalTree> trees;
  trees.emplace_back(std::vector<SurvivalTree::Node>{leaf_node},
                     std::vector<SurvivalTree::Leaf>{{5, h1}}, 0);
  trees.emplace_back(std::vector<SurvivalTree::Node>{leaf_node},
                     std::vector<SurvivalTree::Leaf>{{5, h2}}, 0);
  HyperParams hp{2, 1, 1, 1, SplitRule::kLogRank, 1};
  const SurvivalForest forest(std::move(trees), hp, 0, {1.0, 2.0, 3.0}, 1);

  const std::vector<double> x{0.5};
  const auto mean = forest.predict_chf(x);
  CHECK(mean(1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(mean(2.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(mean(3.0) == doctest::Approx(0.8).epsilon(1e-12));

  // A forest of identical single-leaf trees reproduces that leaf exactly.
  std::vector<SurvivalTree> same;
  same.emplace_back(std::vector<SurvivalTree::Node>{leaf_node},
                    std::vector<SurvivalTree::Leaf>{{5, h1}}, 0);
  same.emplace_back(std::vector<SurvivalTree::Node>{leaf_node},
                    std::vector<SurvivalTree::Leaf>{{5, h1}}, 0);
  const SurvivalForest twin(std::move(same), hp, 0, {1.0, 3.0}, 1);
  const auto twin_chf = twin.predict_chf(x);
  CHECK(twin_chf(1.0) == h1(1.0));
  CHECK(twin_chf(3.0) == h1(3.0));
}

TEST_CASE("ensemble hazard is non-decreasing on random forests") {
  Rng data_rng(37);
  for (int rep = 0; rep < 100; ++rep) {
    const auto data = oracles::random_dataset(data_rng, 40, 3);
    HyperParams hp{3, 2, 3, 3, SplitRule::kLogRank, 4};
    const auto forest = fit_forest(data, hp, 5000 + rep);
    const auto probe = oracles::random_dataset(data_rng, 1, 3);
    const auto chf = forest.predict_chf(probe.row(0));
    double prev = 0.0;
    for (double v : chf.values()) {
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("predict_risk composes the hazard with the risk transform") {
  const auto data = separable_data(10);
  HyperParams hp{1, 1, 3, 4, SplitRule::kLogRank, 7};
  const auto forest = fit_forest(data, hp, 3, {.bootstrap = false});

  const std::vector<double> x{0.0};
  CHECK(forest.predict_risk(x, 0.0) == 0.0);  // no events at time zero
  double prev = -1.0;
  for (double t = 0.0; t <= 40.0; t += 2.0) {
    const double r = forest.predict_risk(x, t);
    CHECK(r >= prev);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    prev = r;
  }
  CHECK(forest.predict_risk(x, 35.0) ==
        doctest::Approx(-std::expm1(-forest.predict_chf(x)(35.0))).epsilon(1e-15));

  const std::vector<double> wrong_dim{0.0, 1.0};
  CHECK_THROWS_AS(forest.predict_chf(wrong_dim), std::domain_error);
  CHECK_THROWS_AS(forest.predict_risk(x, -1.0), std::domain_error);
}

TEST_CASE("a single-leaf forest with hazard ln 2 yields risk one half") {
  SurvivalTree::Node leaf_node;
  leaf_node.leaf = 0;
  const StepFunction h(0.0, {4.0}, {std::log(2.0)});
  std::vector<SurvivalTree> trees;
  trees.emplace_back(std::vector<SurvivalTree::Node>{leaf_node},
                     std::vector<SurvivalTree::Leaf>{{3, h}}, 0);
  HyperParams hp{1, 1, 1, 1, SplitRule::kLogRank, 1};
  const SurvivalForest forest(std::move(trees), hp, 0, {4.0}, 2);
  CHECK(forest.predict_risk(std::vector<double>{0.0, 0.0}, 4.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("forest serialization round-trips predictions bit-for-bit") {
  Rng data_rng(41);
  const auto data = oracles::random_dataset(data_rng, 50, 4);
  HyperParams hp{4, 3, 4, 4, SplitRule::kLogRankScore, 6};
  const auto forest = fit_forest(data, hp, 321);

  std::stringstream buffer;
  survmult::save_forest(buffer, forest);
  const auto loaded = survmult::load_forest(buffer);
  CHECK(loaded == forest);

  const auto probe = oracles::random_dataset(data_rng, 15, 4);
  for (std::size_t i = 0; i < probe.n_rows(); ++i) {
    CHECK(loaded.predict_chf(probe.row(i)) == forest.predict_chf(probe.row(i)));
  }
}

TEST_CASE("forest files reject foreign content") {
  std::stringstream bogus("not-a-forest 1\n");
  CHECK_THROWS_AS(survmult::load_forest(bogus), survmult::ParseError);
}
