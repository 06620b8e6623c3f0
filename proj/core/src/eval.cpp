#include "lobbyml/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"

namespace lobbyml {
namespace {

void require_non_empty(const ScoredSet& scored) {
  scored.validate();
  if (scored.size() == 0) throw ContractError("scored set is empty");
}

std::vector<std::size_t> order_by_score(const ScoredSet& scored) {
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scored.scores[a] < scored.scores[b]; });
  return order;
}

}  // namespace

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void ScoredSet::validate() const {
  if (scores.size() != labels.size()) throw ContractError("scores and labels differ in length");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ContractError("scores must be finite");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw ContractError("labels must be 0 or 1");
  }
}

double accuracy(const ScoredSet& scored, double threshold) {
  require_non_empty(scored);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if ((scored.scores[i] >= threshold) == (scored.labels[i] == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scored.size());
}

double roc_auc(const ScoredSet& scored) {
  scored.validate();
  const std::size_t n = scored.size();
  const std::size_t pos = scored.positives();
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw ContractError("ROC AUC needs at least one positive and one negative");

  std::vector<std::size_t> order = order_by_score(scored);
  // Sum of 1-based mid-ranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scored.scores[order[j + 1]] == scored.scores[order[i]]) ++j;
    double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (scored.labels[order[k]] == 1) rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

std::vector<double> threshold_candidates(const ScoredSet& scored) {
  require_non_empty(scored);
  std::vector<double> distinct = scored.scores;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> candidates;
  candidates.reserve(distinct.size() + 1);
  candidates.push_back(distinct.front() - 1.0);
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    candidates.push_back(distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0);
  }
  candidates.push_back(distinct.back() + 1.0);
  return candidates;
}

ThresholdResult best_threshold(const ScoredSet& validation) {
  std::vector<double> candidates = threshold_candidates(validation);
  std::vector<std::size_t> order = order_by_score(validation);
  const std::size_t n = validation.size();

  // Sweep ascending: items below the threshold are predicted negative.
  std::size_t below = 0, neg_below = 0;
  std::size_t pos_total = validation.positives();
  ThresholdResult best{candidates.front(), -1.0};
  for (double t : candidates) {
    while (below < n && validation.scores[order[below]] < t) {
      if (validation.labels[order[below]] == 0) ++neg_below;
      ++below;
    }
    std::size_t pos_below = below - neg_below;
    std::size_t correct = neg_below + (pos_total - pos_below);
    double acc = static_cast<double>(correct) / static_cast<double>(n);
    if (acc > best.accuracy) best = {t, acc};
  }
  return best;
}

std::string to_string(const ParamValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&value)) return csv::format_double(*d);
  return std::get<std::string>(value);
}

std::string to_string(const ParamPoint& point) {
  std::string out;
  for (const auto& [name, value] : point) {
    if (!out.empty()) out.push_back(';');
    out += name + "=" + to_string(value);
  }
  return out;
}

double as_double(const ParamValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&value)) return *d;
  throw ContractError("parameter value '" + std::get<std::string>(value) + "' is not numeric");
}

std::int64_t as_int(const ParamValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  if (const auto* d = std::get_if<double>(&value); d && std::floor(*d) == *d) return static_cast<std::int64_t>(*d);
  throw ContractError("parameter value '" + to_string(value) + "' is not an integer");
}

const std::string& as_string(const ParamValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  throw ContractError("parameter value '" + to_string(value) + "' is not a string");
}

std::vector<ParamPoint> enumerate_grid(const ParamGrid& grid) {
  if (grid.empty()) throw ContractError("parameter grid is empty");
  std::vector<std::pair<std::string, const std::vector<ParamValue>*>> axes;
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw ContractError("parameter '" + name + "' has no values");
    axes.emplace_back(name, &values);
  }
  std::vector<ParamPoint> points;
  std::vector<std::size_t> position(axes.size(), 0);
  while (true) {
    ParamPoint point;
    for (std::size_t a = 0; a < axes.size(); ++a) point.emplace(axes[a].first, (*axes[a].second)[position[a]]);
    points.push_back(std::move(point));
    // Odometer: the last axis turns fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++position[a] < axes[a].second->size()) break;
      position[a] = 0;
      if (a == 0) return points;
    }
  }
}

GridSearchResult grid_search(const ParamGrid& grid, const std::function<ScoredSet(const ParamPoint&)>& trial) {
  GridSearchResult result;
  bool any = false;
  for (ParamPoint& point : enumerate_grid(grid)) {
    Trial t{std::move(point), std::nullopt, {}};
    try {
      t.val_auc = roc_auc(trial(t.params));
    } catch (const std::exception& e) {
      t.error = e.what();
    }
    if (t.val_auc && (!any || *t.val_auc > result.best_val_auc)) {
      any = true;
      result.best_val_auc = *t.val_auc;
      result.best_params = t.params;
      result.best_index = result.trials.size();
    }
    result.trials.push_back(std::move(t));
  }
  if (!any) {
    std::string reason = result.trials.empty() ? "no trials" : result.trials.front().error;
    throw ContractError("every grid-search trial failed (first error: " + reason + ")");
  }
  return result;
}

}  // namespace lobbyml
