#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobbyml/sparse_vector.hpp"

namespace lobbyml {

enum class SplitCriterion { Gini, Entropy };

std::string_view to_string(SplitCriterion criterion);
SplitCriterion parse_criterion(std::string_view text);

// Impurity of a node holding `positive` positive weight out of `total`.
double impurity(SplitCriterion criterion, double positive, double total);

struct ForestParams {
  std::size_t n_trees = 200;
  std::optional<std::size_t> max_depth;  // unlimited when empty
  SplitCriterion criterion = SplitCriterion::Gini;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::optional<std::size_t> features_per_split;  // ceil(sqrt(m)) when empty
  bool bootstrap = true;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left when x[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // weighted positive fraction at this node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const SparseVector& x) const;
  std::size_t depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t dimension = 0;
  std::string trained_on;

  // Mean leaf value across trees.
  double predict_proba(const SparseVector& x) const;
};

ForestModel train_forest(std::span<const SparseVector> X, std::span<const int> y,
                         const ForestParams& params, std::uint64_t seed);

}  // namespace lobbyml
