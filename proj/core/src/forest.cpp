#include "lobbyml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lobbyml/error.hpp"
#include "lobbyml/random.hpp"
#include "training_data.hpp"

namespace lobbyml {
namespace {

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

struct ValueGroup {
  double value;
  double weight;
  double positive;
};

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> X, std::span<const int> y,
              const std::vector<std::vector<ColumnEntry>>& columns, const ForestParams& params,
              std::size_t features_per_split, std::uint64_t seed)
      : X_(X), y_(y), columns_(columns), params_(params), mtry_(features_per_split), rng_(seed),
        weight_(X.size(), 0.0), node_of_(X.size(), -1), seen_stamp_(X.empty() ? 0 : X[0].dimension(), 0) {}

  DecisionTree build() {
    const std::size_t n = X_.size();
    if (params_.bootstrap) {
      for (std::size_t draw = 0; draw < n; ++draw) weight_[rng_.uniform_index(n)] += 1.0;
    } else {
      std::fill(weight_.begin(), weight_.end(), 1.0);
    }
    std::vector<std::uint32_t> root;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight_[i] > 0.0) root.push_back(static_cast<std::uint32_t>(i));
    }

    struct Pending {
      std::int32_t node;
      std::vector<std::uint32_t> rows;
      std::size_t depth;
    };
    std::vector<Pending> stack;
    tree_.nodes.push_back({});
    stack.push_back({0, std::move(root), 0});

    while (!stack.empty()) {
      Pending item = std::move(stack.back());
      stack.pop_back();
      for (std::uint32_t r : item.rows) node_of_[r] = item.node;

      double total = 0.0, positive = 0.0;
      for (std::uint32_t r : item.rows) {
        total += weight_[r];
        if (y_[r] == 1) positive += weight_[r];
      }
      TreeNode& node = tree_.nodes[static_cast<std::size_t>(item.node)];
      node.value = positive / total;

      bool pure = positive == 0.0 || positive == total;
      bool depth_reached = params_.max_depth && item.depth >= *params_.max_depth;
      if (pure || depth_reached || total < static_cast<double>(params_.min_samples_split) ||
          total < 2.0 * static_cast<double>(params_.min_samples_leaf)) {
        continue;
      }
      Split split = find_split(item.node, item.rows, total, positive);
      if (split.feature < 0) continue;

      std::vector<std::uint32_t> left_rows, right_rows;
      for (std::uint32_t r : item.rows) {
        (X_[r].at(static_cast<std::uint32_t>(split.feature)) <= split.threshold ? left_rows : right_rows).push_back(r);
      }
      auto left = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.push_back({});
      tree_.nodes.push_back({});
      TreeNode& parent = tree_.nodes[static_cast<std::size_t>(item.node)];
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.left = left;
      parent.right = left + 1;
      // Right pushed first so the left subtree is built first.
      stack.push_back({left + 1, std::move(right_rows), item.depth + 1});
      stack.push_back({left, std::move(left_rows), item.depth + 1});
    }
    return std::move(tree_);
  }

 private:
  // Only features with a nonzero value somewhere in the node can split it.
  // They are visited in random order until mtry non-constant ones are scored.
  Split find_split(std::int32_t node, const std::vector<std::uint32_t>& rows, double total, double positive) {
    ++stamp_;
    present_.clear();
    for (std::uint32_t r : rows) {
      for (const auto& e : X_[r].entries()) {
        if (seen_stamp_[e.index] != stamp_) {
          seen_stamp_[e.index] = stamp_;
          present_.push_back(e.index);
        }
      }
    }
    std::sort(present_.begin(), present_.end());

    Split best;
    std::size_t scored = 0;
    for (std::size_t k = 0; k < present_.size() && scored < mtry_; ++k) {
      std::size_t pick = k + static_cast<std::size_t>(rng_.uniform_index(present_.size() - k));
      std::swap(present_[k], present_[pick]);
      std::uint32_t feature = present_[k];
      if (evaluate_feature(node, rows, feature, total, positive, best)) ++scored;
    }
    return best;
  }

  // Scores all thresholds of one feature; returns false if it is constant in
  // the node.
  bool evaluate_feature(std::int32_t node, const std::vector<std::uint32_t>& rows, std::uint32_t feature,
                        double total, double positive, Split& best) {
    groups_.clear();
    double nz_weight = 0.0, nz_positive = 0.0;
    auto add = [&](std::uint32_t r, double v) {
      double w = weight_[r];
      double p = y_[r] == 1 ? w : 0.0;
      groups_.push_back({v, w, p});
      nz_weight += w;
      nz_positive += p;
    };
    const auto& column = columns_[feature];
    if (column.size() <= 8 * rows.size()) {
      for (const auto& e : column) {
        if (node_of_[e.row] == node) add(e.row, e.value);
      }
    } else {
      for (std::uint32_t r : rows) {
        double v = X_[r].at(feature);
        if (v != 0.0) add(r, v);
      }
    }
    double zero_weight = total - nz_weight;
    if (zero_weight > 0.5) groups_.push_back({0.0, zero_weight, positive - nz_positive});

    std::sort(groups_.begin(), groups_.end(), [](const ValueGroup& a, const ValueGroup& b) { return a.value < b.value; });
    std::size_t merged = 0;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      if (merged > 0 && groups_[merged - 1].value == groups_[i].value) {
        groups_[merged - 1].weight += groups_[i].weight;
        groups_[merged - 1].positive += groups_[i].positive;
      } else {
        groups_[merged++] = groups_[i];
      }
    }
    groups_.resize(merged);
    if (groups_.size() < 2) return false;

    const double min_leaf = static_cast<double>(params_.min_samples_leaf);
    double left_w = 0.0, left_p = 0.0;
    for (std::size_t i = 0; i + 1 < groups_.size(); ++i) {
      left_w += groups_[i].weight;
      left_p += groups_[i].positive;
      double right_w = total - left_w;
      if (left_w < min_leaf || right_w < min_leaf) continue;
      double score = (left_w * impurity(params_.criterion, left_p, left_w) +
                      right_w * impurity(params_.criterion, positive - left_p, right_w)) /
                     total;
      if (score < best.score) {
        double lo = groups_[i].value, hi = groups_[i + 1].value;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best.feature = static_cast<std::int32_t>(feature);
        best.threshold = mid;
        best.score = score;
      }
    }
    return true;
  }

  std::span<const SparseVector> X_;
  std::span<const int> y_;
  const std::vector<std::vector<ColumnEntry>>& columns_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng rng_;
  std::vector<double> weight_;
  std::vector<std::int32_t> node_of_;
  std::vector<std::uint64_t> seen_stamp_;
  std::uint64_t stamp_ = 0;
  std::vector<std::uint32_t> present_;
  std::vector<ValueGroup> groups_;
  DecisionTree tree_;
};

}  // namespace

std::string_view to_string(SplitCriterion criterion) {
  return criterion == SplitCriterion::Gini ? "gini" : "entropy";
}

SplitCriterion parse_criterion(std::string_view text) {
  if (text == "gini") return SplitCriterion::Gini;
  if (text == "entropy") return SplitCriterion::Entropy;
  throw ContractError("unknown split criterion '" + std::string(text) + "' (expected gini or entropy)");
}

double impurity(SplitCriterion criterion, double positive, double total) {
  if (total <= 0.0) return 0.0;
  double p = positive / total;
  double q = 1.0 - p;
  if (criterion == SplitCriterion::Gini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

double DecisionTree::predict(const SparseVector& x) const {
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    at = static_cast<std::size_t>(x.at(static_cast<std::uint32_t>(node.feature)) <= node.threshold ? node.left
                                                                                                   : node.right);
  }
  return nodes[at].value;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[at].is_leaf()) {
      stack.push_back({static_cast<std::size_t>(nodes[at].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes[at].right), d + 1});
    }
  }
  return deepest;
}

double ForestModel::predict_proba(const SparseVector& x) const {
  if (x.dimension() != dimension) {
    throw ContractError("feature dimension " + std::to_string(x.dimension()) + " does not match model dimension " +
                        std::to_string(dimension));
  }
  if (trees.empty()) throw ContractError("forest has no trees");
  double total = 0.0;
  for (const DecisionTree& tree : trees) total += tree.predict(x);
  return total / static_cast<double>(trees.size());
}

ForestModel train_forest(std::span<const SparseVector> X, std::span<const int> y, const ForestParams& params,
                         std::uint64_t seed) {
  detail::validate_training_data(X, y);
  if (params.n_trees == 0) throw ContractError("n_trees must be >= 1");
  if (params.min_samples_split < 2) throw ContractError("min_samples_split must be >= 2");
  if (params.min_samples_leaf < 1) throw ContractError("min_samples_leaf must be >= 1");
  if (params.max_depth && *params.max_depth == 0) throw ContractError("max_depth must be >= 1");
  const std::size_t m = X[0].dimension();
  if (m == 0) throw ContractError("cannot train a forest on zero-dimensional features");
  std::size_t mtry = params.features_per_split.value_or(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
  mtry = std::clamp<std::size_t>(mtry, 1, m);

  std::vector<std::vector<ColumnEntry>> columns(m);
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (const auto& e : X[i].entries()) columns[e.index].push_back({static_cast<std::uint32_t>(i), e.value});
  }

  ForestModel forest;
  forest.params = params;
  forest.seed = seed;
  forest.dimension = m;
  forest.trees.reserve(params.n_trees);
  Rng master(seed);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    TreeBuilder builder(X, y, columns, params, mtry, master.fork_seed());
    forest.trees.push_back(builder.build());
  }
  return forest;
}

}  // namespace lobbyml
