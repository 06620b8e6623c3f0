#include <cmath>

#include <gtest/gtest.h>

#include "lobbyml/error.hpp"
#include "lobbyml/eval.hpp"
#include "lobbyml/random.hpp"

namespace lobbyml {
namespace {

ScoredSet make_set(std::vector<double> scores, std::vector<int> labels) {
  ScoredSet s;
  for (std::size_t i = 0; i < scores.size(); ++i) s.add(scores[i], labels[i]);
  return s;
}

double brute_auc(const ScoredSet& s) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.labels[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.labels[j] != 0) continue;
      pairs += 1;
      if (s.scores[i] > s.scores[j]) wins += 1;
      else if (s.scores[i] == s.scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double brute_accuracy(const ScoredSet& s, double t) {
  double ok = 0;
  for (std::size_t i = 0; i < s.size(); ++i) ok += (s.scores[i] >= t) == (s.labels[i] == 1);
  return ok / static_cast<double>(s.size());
}

ScoredSet random_set(Rng& rng, std::size_t max_n) {
  std::size_t n = 2 + rng.uniform_index(max_n - 1);
  ScoredSet s;
  std::size_t levels = 1 + rng.uniform_index(12);
  for (std::size_t i = 0; i < n; ++i) {
    s.add(static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels), rng.bernoulli(0.5) ? 1 : 0);
  }
  s.labels[0] = 1;
  s.labels[1] = 0;
  return s;
}

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy(make_set({0.9, 0.1}, {1, 0}), 0.5), 1.0);
  EXPECT_NEAR(accuracy(make_set({0.9, 0.2, 0.6}, {1, 0, 0}), 0.5), 2.0 / 3.0, 1e-15);
  for (double t : {0.0, 0.3, 0.5, 1.0}) EXPECT_EQ(accuracy(make_set({0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0}), t), 0.5);
  EXPECT_EQ(accuracy(make_set({0.5}, {1}), 0.5), 1.0);
  EXPECT_THROW(accuracy(ScoredSet{}, 0.5), ContractError);
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(make_set({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_EQ(roc_auc(make_set({0.3, 0.3, 0.3}, {0, 1, 1})), 0.5);
  EXPECT_EQ(roc_auc(make_set({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1})), 0.75);
  EXPECT_THROW(roc_auc(make_set({0.1, 0.2}, {1, 1})), ContractError);
  EXPECT_THROW(roc_auc(make_set({0.1, NAN}, {1, 0})), ContractError);
  EXPECT_THROW(roc_auc(make_set({0.1, 0.2}, {2, 0})), ContractError);
}

TEST(RocAuc, MatchesBruteForceWithTies) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    ScoredSet s = random_set(rng, 200);
    EXPECT_NEAR(roc_auc(s), brute_auc(s), 1e-12);
  }
}

TEST(RocAuc, InvariantUnderMonotoneTransformAndFlip) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    ScoredSet s = random_set(rng, 150);
    ScoredSet t = s, flipped = s;
    for (double& v : t.scores) v = std::exp(3.0 * v) - 7.0;
    for (int& l : flipped.labels) l = 1 - l;
    EXPECT_NEAR(roc_auc(t), roc_auc(s), 1e-12);
    EXPECT_NEAR(roc_auc(flipped), 1.0 - roc_auc(s), 1e-12);
  }
}

TEST(BestThreshold, Examples) {
  ThresholdResult sep = best_threshold(make_set({0.1, 0.3, 0.7, 0.9}, {0, 0, 1, 1}));
  EXPECT_EQ(sep.accuracy, 1.0);
  EXPECT_GT(sep.threshold, 0.3);
  EXPECT_LT(sep.threshold, 0.7);

  ThresholdResult all_pos = best_threshold(make_set({0.2, 0.5, 0.6}, {1, 1, 1}));
  EXPECT_EQ(all_pos.accuracy, 1.0);
  EXPECT_LT(all_pos.threshold, 0.2);

  ScoredSet s = make_set({0.2, 0.4, 0.6, 0.8}, {0, 1, 0, 1});
  ThresholdResult r = best_threshold(s);
  EXPECT_EQ(r.accuracy, 0.75);
  for (double t : threshold_candidates(s)) EXPECT_LE(accuracy(s, t), r.accuracy);
  EXPECT_DOUBLE_EQ(r.threshold, 0.3);
  EXPECT_THROW(best_threshold(ScoredSet{}), ContractError);
}

TEST(BestThreshold, CandidatesAreMidpointsPlusSentinels) {
  std::vector<double> c = threshold_candidates(make_set({0.5, 0.1, 0.5, 0.3}, {1, 0, 0, 1}));
  ASSERT_EQ(c.size(), 4u);
  EXPECT_LT(c.front(), 0.1);
  EXPECT_DOUBLE_EQ(c[1], 0.2);
  EXPECT_DOUBLE_EQ(c[2], 0.4);
  EXPECT_GT(c.back(), 0.5);
}

TEST(BestThreshold, OptimalOverAllCandidatesProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    ScoredSet s = random_set(rng, 120);
    ThresholdResult r = best_threshold(s);
    EXPECT_EQ(r.accuracy, accuracy(s, r.threshold));
    EXPECT_EQ(r.accuracy, brute_accuracy(s, r.threshold));
    double best = 0.0, first = 0.0;
    for (double t : threshold_candidates(s)) {
      double a = brute_accuracy(s, t);
      if (a > best) {
        best = a;
        first = t;
      }
    }
    EXPECT_EQ(r.accuracy, best);
    EXPECT_EQ(r.threshold, first);
  }
}

TEST(Grid, EnumerationOrder) {
  ParamGrid grid{{"penalty", {std::string("l1"), std::string("l2")}}, {"C", {10.0, 0.1}}};
  std::vector<ParamPoint> points = enumerate_grid(grid);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(to_string(points[0]), "C=10;penalty=l1");
  EXPECT_EQ(to_string(points[1]), "C=10;penalty=l2");
  EXPECT_EQ(to_string(points[2]), "C=0.1;penalty=l1");
  EXPECT_EQ(to_string(points[3]), "C=0.1;penalty=l2");
  EXPECT_THROW(enumerate_grid({}), ContractError);
  EXPECT_THROW(enumerate_grid({{"C", {}}}), ContractError);
}

TEST(Grid, ValueAccessors) {
  EXPECT_EQ(as_double(ParamValue{std::int64_t{3}}), 3.0);
  EXPECT_EQ(as_int(ParamValue{4.0}), 4);
  EXPECT_THROW(as_int(ParamValue{4.5}), ContractError);
  EXPECT_THROW(as_double(ParamValue{std::string("x")}), ContractError);
  EXPECT_THROW(as_string(ParamValue{1.0}), ContractError);
}

TEST(GridSearch, SinglePointAndTies) {
  auto constant = [](const ParamPoint&) { return make_set({0.1, 0.9}, {0, 1}); };
  GridSearchResult one = grid_search({{"C", {1.0}}}, constant);
  EXPECT_EQ(to_string(one.best_params), "C=1");
  EXPECT_EQ(one.best_val_auc, 1.0);

  GridSearchResult dup = grid_search({{"C", {2.0, 2.0, 3.0}}}, constant);
  EXPECT_EQ(dup.best_index, 0u);
  EXPECT_EQ(dup.trials.size(), 3u);
}

TEST(GridSearch, FailedTrialsAreRecordedAndExcluded) {
  auto trial = [](const ParamPoint& p) {
    if (as_double(p.at("C")) < 1.0) throw ContractError("boom");
    return as_double(p.at("C")) > 5.0 ? make_set({0.1, 0.9}, {0, 1}) : make_set({0.9, 0.1}, {0, 1});
  };
  GridSearchResult r = grid_search({{"C", {0.5, 2.0, 10.0}}}, trial);
  EXPECT_FALSE(r.trials[0].val_auc.has_value());
  EXPECT_EQ(r.trials[0].error, "boom");
  EXPECT_EQ(r.best_index, 2u);
  EXPECT_EQ(r.best_val_auc, 1.0);
  EXPECT_THROW(grid_search({{"C", {0.1}}}, trial), ContractError);
}

TEST(GridSearch, Reproducible) {
  auto trial = [](const ParamPoint& p) {
    Rng rng(static_cast<std::uint64_t>(as_int(p.at("seed"))));
    ScoredSet s;
    for (int i = 0; i < 30; ++i) s.add(rng.uniform01(), i % 2);
    return s;
  };
  ParamGrid grid{{"seed", {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}}}};
  GridSearchResult a = grid_search(grid, trial), b = grid_search(grid, trial);
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) EXPECT_EQ(a.trials[i].val_auc, b.trials[i].val_auc);
  EXPECT_EQ(a.best_index, b.best_index);
}

}  // namespace
}  // namespace lobbyml
