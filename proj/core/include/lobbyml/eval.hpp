#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lobbyml {

struct ScoredSet {
  std::vector<double> scores;
  std::vector<int> labels;

  void add(double score, int label) {
    scores.push_back(score);
    labels.push_back(label);
  }
  std::size_t size() const { return scores.size(); }
  std::size_t positives() const;
  // Throws ContractError on length mismatch, non-finite scores or labels
  // outside {0, 1}.
  void validate() const;
};

// Fraction of items with (score >= threshold) == label.
double accuracy(const ScoredSet& scored, double threshold);

// Mann-Whitney statistic with mid-ranks: ties between a positive and a
// negative count one half.
double roc_auc(const ScoredSet& scored);

struct ThresholdResult {
  double threshold = 0.5;
  double accuracy = 0.0;
};

// Midpoints between consecutive distinct scores, plus one sentinel below the
// minimum and one above the maximum, ascending.
std::vector<double> threshold_candidates(const ScoredSet& scored);

// Accuracy-maximizing candidate; ties go to the smallest threshold.
ThresholdResult best_threshold(const ScoredSet& validation);

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamPoint = std::map<std::string, ParamValue>;
// Keys iterate lexicographically; the first key varies slowest.
using ParamGrid = std::map<std::string, std::vector<ParamValue>>;

std::string to_string(const ParamValue& value);
// "C=10;penalty=l2"
std::string to_string(const ParamPoint& point);
double as_double(const ParamValue& value);
std::int64_t as_int(const ParamValue& value);
const std::string& as_string(const ParamValue& value);

std::vector<ParamPoint> enumerate_grid(const ParamGrid& grid);

struct Trial {
  ParamPoint params;
  std::optional<double> val_auc;  // empty when the trial failed
  std::string error;
};

struct GridSearchResult {
  ParamPoint best_params;
  double best_val_auc = 0.0;
  std::size_t best_index = 0;
  std::vector<Trial> trials;
};

// Runs `trial` for every lattice point in grid order and keeps the highest
// validation AUC (earliest wins ties). A throwing trial is recorded as
// failed; if every trial fails a ContractError is thrown.
GridSearchResult grid_search(const ParamGrid& grid,
                             const std::function<ScoredSet(const ParamPoint&)>& trial);

}  // namespace lobbyml
