#include <cmath>

#include <gtest/gtest.h>

#include "lobbyml/error.hpp"
#include "lobbyml/forest.hpp"
#include "lobbyml/random.hpp"
#include "test_support.hpp"

namespace lobbyml {
namespace {

using testing::dense;

ForestParams single_tree() {
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  return p;
}

struct Data {
  std::vector<SparseVector> X;
  std::vector<int> y;
};

Data random_data(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(m, 0.0);
    for (double& v : row) {
      if (rng.bernoulli(0.3)) v = std::floor(rng.uniform01() * 8.0) / 4.0;
    }
    d.y.push_back(row[0] + row[1] > 1.0 || rng.bernoulli(0.1) ? 1 : 0);
    d.X.push_back(dense(row));
  }
  d.y[0] = 0;
  d.y[1] = 1;
  return d;
}

TEST(Impurity, ReferenceValues) {
  EXPECT_EQ(impurity(SplitCriterion::Gini, 5.0, 10.0), 0.5);
  EXPECT_EQ(impurity(SplitCriterion::Entropy, 5.0, 10.0), 1.0);
  EXPECT_EQ(impurity(SplitCriterion::Gini, 0.0, 4.0), 0.0);
  EXPECT_EQ(impurity(SplitCriterion::Entropy, 4.0, 4.0), 0.0);
  EXPECT_NEAR(impurity(SplitCriterion::Gini, 1.0, 4.0), 0.375, 1e-15);
}

TEST(TrainForest, OneDimensionalSplit) {
  std::vector<SparseVector> X{dense({0.0}), dense({1.0}), dense({0.0}), dense({1.0})};
  std::vector<int> y{0, 1, 0, 1};
  ForestModel f = train_forest(X, y, single_tree(), 1);
  ASSERT_EQ(f.trees.size(), 1u);
  const auto& nodes = f.trees[0].nodes;
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_EQ(nodes[0].feature, 0);
  EXPECT_GT(nodes[0].threshold, 0.0);
  EXPECT_LT(nodes[0].threshold, 1.0);
  for (std::size_t i = 0; i < X.size(); ++i) EXPECT_EQ(f.predict_proba(X[i]), static_cast<double>(y[i]));
}

TEST(TrainForest, PureNodeIsLeaf) {
  std::vector<SparseVector> X{dense({0.0}), dense({1.0}), dense({2.0})};
  std::vector<int> y{1, 1, 0};
  ForestParams p = single_tree();
  ForestModel f = train_forest(X, y, p, 3);
  for (const TreeNode& n : f.trees[0].nodes) {
    if (n.is_leaf()) EXPECT_TRUE(n.value == 0.0 || n.value == 1.0);
  }
  std::vector<SparseVector> pure{dense({0.0}), dense({1.0})};
  std::vector<int> both{1, 0};
  p.min_samples_split = 3;
  ForestModel stump = train_forest(pure, both, p, 3);
  ASSERT_EQ(stump.trees[0].nodes.size(), 1u);
  EXPECT_EQ(stump.trees[0].nodes[0].value, 0.5);
}

TEST(ForestModel, MeanOfLeafFractions) {
  ForestModel f;
  f.dimension = 1;
  DecisionTree a, b;
  a.nodes.push_back({-1, 0.0, -1, -1, 0.2});
  b.nodes.push_back({-1, 0.0, -1, -1, 0.6});
  f.trees = {a, b};
  EXPECT_NEAR(f.predict_proba(SparseVector(1)), 0.4, 1e-15);
  EXPECT_THROW(f.predict_proba(SparseVector(2)), ContractError);
}

TEST(TrainForest, FixedSeedIsDeterministic) {
  Data d = random_data(150, 12, 4);
  ForestParams p;
  p.n_trees = 15;
  ForestModel a = train_forest(d.X, d.y, p, 77), b = train_forest(d.X, d.y, p, 77), c = train_forest(d.X, d.y, p, 78);
  EXPECT_EQ(a.trees, b.trees);
  EXPECT_NE(a.trees, c.trees);
}

TEST(TrainForest, StructuralInvariants) {
  Data d = random_data(200, 10, 9);
  for (SplitCriterion crit : {SplitCriterion::Gini, SplitCriterion::Entropy}) {
    ForestParams p;
    p.n_trees = 10;
    p.criterion = crit;
    p.max_depth = 4;
    p.min_samples_leaf = 3;
    ForestModel f = train_forest(d.X, d.y, p, 5);
    for (const DecisionTree& t : f.trees) {
      EXPECT_LE(t.depth(), 4u);
      for (const TreeNode& n : t.nodes) {
        EXPECT_GE(n.value, 0.0);
        EXPECT_LE(n.value, 1.0);
        if (!n.is_leaf()) {
          EXPECT_LT(static_cast<std::size_t>(n.feature), f.dimension);
          EXPECT_GT(n.left, 0);
          EXPECT_GT(n.right, 0);
        }
      }
    }
    for (const SparseVector& x : d.X) {
      double p1 = f.predict_proba(x);
      EXPECT_GE(p1, 0.0);
      EXPECT_LE(p1, 1.0);
    }
  }
}

TEST(TrainForest, MinSamplesLeafWithoutBootstrap) {
  Data d = random_data(120, 6, 10);
  ForestParams p = single_tree();
  p.min_samples_leaf = 7;
  p.features_per_split = 6;
  ForestModel f = train_forest(d.X, d.y, p, 2);
  std::vector<int> per_leaf(f.trees[0].nodes.size(), 0);
  for (const SparseVector& x : d.X) {
    std::int32_t at = 0;
    const auto& nodes = f.trees[0].nodes;
    while (!nodes[at].is_leaf()) at = x.at(static_cast<std::uint32_t>(nodes[at].feature)) <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
    ++per_leaf[static_cast<std::size_t>(at)];
  }
  for (std::size_t i = 0; i < per_leaf.size(); ++i) {
    if (f.trees[0].nodes[i].is_leaf()) EXPECT_GE(per_leaf[i], 7);
  }
}

TEST(TrainForest, InvariantToMonotoneFeatureTransform) {
  Data d = random_data(160, 8, 15);
  std::vector<SparseVector> transformed;
  for (const SparseVector& x : d.X) {
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (const auto& e : x.entries()) pairs.emplace_back(e.index, e.value * e.value * e.value + e.value);
    transformed.push_back(SparseVector::from_pairs(x.dimension(), pairs));
  }
  // Every row reaches every node's training set only without bootstrap;
  // out-of-bag rows may fall between two midpoints that map differently.
  ForestParams p;
  p.n_trees = 8;
  p.bootstrap = false;
  ForestModel a = train_forest(d.X, d.y, p, 21), b = train_forest(transformed, d.y, p, 21);
  for (std::size_t i = 0; i < d.X.size(); ++i) EXPECT_EQ(a.predict_proba(d.X[i]), b.predict_proba(transformed[i]));
}

TEST(TrainForest, Errors) {
  std::vector<SparseVector> X{dense({1.0}), dense({2.0})};
  std::vector<int> one_class{0, 0};
  EXPECT_THROW(train_forest(X, one_class, {}, 1), ContractError);
  ForestParams bad;
  bad.n_trees = 0;
  std::vector<int> y{0, 1};
  EXPECT_THROW(train_forest(X, y, bad, 1), ContractError);
  EXPECT_EQ(parse_criterion("entropy"), SplitCriterion::Entropy);
  EXPECT_THROW(parse_criterion("mse"), ContractError);
}

}  // namespace
}  // namespace lobbyml
