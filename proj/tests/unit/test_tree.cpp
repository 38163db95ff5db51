#include "doctest.h"

#include "skycell/error.hpp"
#include "skycell/ml.hpp"
#include "skycell/rng.hpp"
#include "skycell/tree_oracle.hpp"

#include <algorithm>
#include <random>

using namespace skycell;
using doctest::Approx;

namespace {

LabeledSample pt(double x, double y, bool drone) {
  LabeledSample s;
  s.features = {x, y};
  s.label = drone ? Label::Drone : Label::Terrestrial;
  s.ue_class = drone ? UeClass::Aerial : UeClass::Outdoor;
  s.height_m = drone ? 60 : 1.5;
  return s;
}

// Coarse grids force many duplicate values and tied split scores.
Dataset random_dataset(rng::Stream& r, std::size_t n, int levels) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(r.below(static_cast<std::uint64_t>(levels)));
    const double y = static_cast<double>(r.below(static_cast<std::uint64_t>(levels))) * 0.5;
    const bool drone = r.uniform() < (x + y > levels * 0.7 ? 0.8 : 0.25);
    d.samples.push_back(pt(x, y, drone));
  }
  return d;
}

} // namespace

TEST_CASE("gini values") {
  CHECK(ml::gini(0, 10) == 0.0);
  CHECK(ml::gini(10, 10) == 0.0);
  CHECK(ml::gini(5, 10) == Approx(0.5));
  CHECK(ml::gini(1, 4) == Approx(0.375));
}

TEST_CASE("pure node is a single leaf") {
  Dataset d;
  for (int i = 0; i < 20; ++i) d.samples.push_back(pt(i, i, true));
  const auto t = ml::train_tree(d, {});
  REQUIRE(t.nodes.size() == 1);
  CHECK(t.nodes[0].is_leaf());
  CHECK(t.nodes[0].drone_probability == 1.0);
  CHECK(t.nodes[0].sample_count == 20);
}

TEST_CASE("one clean split at the midpoint") {
  Dataset d;
  for (int i = 0; i < 10; ++i) d.samples.push_back(pt(i, 0, i >= 5));
  const auto t = ml::train_tree(d, {6, 1});
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].feature_index == 0);
  CHECK(t.nodes[0].threshold == 4.5);
  CHECK(t.nodes[t.nodes[0].left].drone_probability == 0.0);
  CHECK(t.nodes[t.nodes[0].right].drone_probability == 1.0);
  CHECK(ml::predict_proba(t, FeatureVector{4.49, 0}) == 0.0);
  CHECK(ml::predict_proba(t, FeatureVector{4.5, 0}) == 1.0);
}

TEST_CASE("ties prefer the lower feature then the lower threshold") {
  // Both features separate identically; feature 0 must win.
  Dataset d;
  for (int i = 0; i < 8; ++i) d.samples.push_back(pt(i, i * 10, i >= 4));
  const auto t = ml::train_tree(d, {1, 1});
  CHECK(t.nodes[0].feature_index == 0);
  // Symmetric XOR-free case with two equally good thresholds on one feature.
  Dataset e;
  for (double x : {0.0, 1.0, 2.0, 3.0}) e.samples.push_back(pt(x, 0, x == 1.0 || x == 2.0));
  const auto u = ml::train_tree(e, {1, 1});
  REQUIRE_FALSE(u.nodes[0].is_leaf());
  CHECK(u.nodes[0].threshold == 0.5);
}

TEST_CASE("depth and leaf-size limits are honoured") {
  rng::Stream r(12);
  for (int t = 0; t < 30; ++t) {
    const auto d = random_dataset(r, 200, 50);
    for (int depth : {0, 1, 3, 6})
      for (int leaf : {1, 5, 20}) {
        const auto tree = ml::train_tree(d, {depth, leaf});
        CHECK(tree.depth() <= depth);
        CHECK_NOTHROW(ml::validate_tree(tree));
        for (const auto& n : tree.nodes)
          if (n.is_leaf() && tree.nodes.size() > 1) CHECK(n.sample_count >= leaf);
        CHECK(tree.leaf_count() == (tree.nodes.size() + 1) / 2);
      }
  }
}

TEST_CASE("tree matches the exhaustive oracle on small datasets") {
  rng::Stream r(2024);
  for (int t = 0; t < 200; ++t) {
    const auto n = 2 + r.below(49);
    const auto d = random_dataset(r, n, 2 + static_cast<int>(r.below(12)));
    const ml::TreeConfig cfg{static_cast<int>(r.below(7)), 1 + static_cast<int>(r.below(5))};
    const auto fast = ml::train_tree(d, cfg);
    const auto slow = oracle::brute_force_tree(d, cfg);
    CHECK(fast.nodes == slow.nodes);
  }
}

TEST_CASE("tree is invariant to sample order") {
  rng::Stream r(5);
  std::mt19937 g(5);
  for (int t = 0; t < 20; ++t) {
    auto d = random_dataset(r, 120, 15);
    const auto ref = ml::train_tree(d, {});
    std::shuffle(d.samples.begin(), d.samples.end(), g);
    CHECK(ml::train_tree(d, {}).nodes == ref.nodes);
  }
}

TEST_CASE("no split without strict impurity decrease") {
  // Balanced checkerboard: no single axis split lowers Gini.
  Dataset d;
  d.samples = {pt(0, 0, true), pt(1, 1, true), pt(0, 1, false), pt(1, 0, false)};
  const auto t = ml::train_tree(d, {6, 1});
  CHECK(t.nodes.size() == 1);
  CHECK(t.nodes[0].drone_probability == 0.5);
}

TEST_CASE("separable data is classified perfectly") {
  Dataset d;
  rng::Stream r(1);
  for (int i = 0; i < 100; ++i) d.samples.push_back(pt(r.uniform(-100, -70), r.uniform(5, 15), false));
  for (int i = 0; i < 100; ++i) d.samples.push_back(pt(r.uniform(-60, -30), r.uniform(0, 4), true));
  const ml::Model m = ml::train_tree(d, {});
  CHECK(ml::evaluate(m, d).accuracy == 1.0);
}

TEST_CASE("structural validation") {
  ml::TreeModel t;
  CHECK_THROWS_AS(ml::validate_tree(t), Error);
  t.nodes = {ml::TreeNode{0, 1.0, 1, 5, 0.5, 10}, ml::TreeNode{}, ml::TreeNode{}};
  CHECK_THROWS_AS(ml::validate_tree(t), Error);
  t.nodes = {ml::TreeNode{0, 1.0, 1, 2, 0.5, 10}, ml::TreeNode{-1, 0, -1, -1, 0.0, 5}, ml::TreeNode{-1, 0, -1, -1, 1.0, 5}};
  CHECK_NOTHROW(ml::validate_tree(t));
  t.nodes[2].drone_probability = 1.5;
  CHECK_THROWS_AS(ml::validate_tree(t), Error);
  t.nodes[2].drone_probability = 1.0;
  t.nodes[0].right = 1;
  CHECK_THROWS_AS(ml::validate_tree(t), Error);
}

TEST_CASE("bad config and empty data") {
  CHECK_THROWS_AS(ml::train_tree(Dataset{}, {}), Error);
  Dataset d;
  d.samples = {pt(0, 0, true)};
  CHECK_THROWS_AS(ml::train_tree(d, {-1, 1}), Error);
  CHECK_THROWS_AS(ml::train_tree(d, {3, 0}), Error);
  CHECK_THROWS_AS(oracle::brute_force_tree(Dataset{}, {}), Error);
}
