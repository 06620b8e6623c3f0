#include "lobbyml/unlabeled.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/random.hpp"

namespace lobbyml {
namespace {

std::string threshold_column(double t) { return "share_gt_" + csv::format_double(t); }

std::vector<double> shares_above(const std::vector<double>& scores, const std::vector<double>& thresholds) {
  std::vector<double> shares;
  for (double t : thresholds) {
    auto above = std::count_if(scores.begin(), scores.end(), [t](double s) { return s > t; });
    shares.push_back(scores.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(scores.size()));
  }
  return shares;
}

void check_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw ContractError("at least one threshold is required");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) throw ContractError("thresholds must lie in [0, 1]");
  }
}

}  // namespace

PoolResult filter_pool(const Corpus& all_bills, const PoolFilters& filters) {
  PoolResult result;
  for (const BillDocument& doc : all_bills) {
    if (doc.lobby_count) {
      ++result.excluded_known_count;
    } else if (!doc.introduced_date) {
      ++result.excluded_undated;
    } else if (doc.introduced_date->year < filters.min_year) {
      ++result.excluded_year;
    } else if (doc.word_count < filters.min_words) {
      ++result.excluded_short;
    } else {
      result.pool.push_back(doc);
    }
  }
  return result;
}

Corpus select_positives(const Corpus& all_bills, const LabelingScheme& scheme) {
  Corpus positives;
  for (const BillDocument& doc : all_bills) {
    if (doc.lobby_count && *doc.lobby_count >= scheme.positive_min) positives.push_back(doc);
  }
  return positives;
}

RotationResult rotation_score(const Corpus& positives, const Corpus& pool, const RotationConfig& config,
                              const RotationModelSpec& spec) {
  const std::size_t B = config.num_batches;
  if (B < 2) throw ContractError("num_batches must be >= 2");
  if (positives.empty()) throw ContractError("rotation scoring needs at least one positive bill");
  if (pool.size() < B) {
    throw ContractError("unlabeled pool has " + std::to_string(pool.size()) + " bills, fewer than num_batches = " +
                        std::to_string(B));
  }

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  rng.shuffle(std::span<std::size_t>(order));

  // Contiguous chunks of the shuffled order; the first n % B get one extra.
  std::vector<std::size_t> batch_of(pool.size());
  std::vector<std::vector<std::size_t>> members(B);
  const std::size_t base = pool.size() / B, extra = pool.size() % B;
  std::size_t cursor = 0;
  for (std::size_t b = 0; b < B; ++b) {
    std::size_t size = base + (b < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j, ++cursor) {
      members[b].push_back(order[cursor]);
      batch_of[order[cursor]] = b;
    }
  }

  std::vector<TokenSequence> positive_tokens, pool_tokens;
  for (const BillDocument& doc : positives) positive_tokens.push_back(clean(doc.raw_text, spec.cleaning));
  for (const BillDocument& doc : pool) pool_tokens.push_back(clean(doc.raw_text, spec.cleaning));

  RotationResult result;
  result.scores.resize(pool.size());
  for (std::size_t p = 0; p < pool.size(); ++p) {
    result.scores[p].bill_id = pool[p].id;
    result.scores[p].batch = batch_of[p];
    result.scores[p].iteration_scores.assign(B - 1, 0.0);
  }

  for (std::size_t i = 0; i < B; ++i) {
    std::vector<TokenSequence> train = positive_tokens;
    std::vector<int> labels(positive_tokens.size(), 1);
    for (std::size_t p : members[i]) {
      train.push_back(pool_tokens[p]);
      labels.push_back(0);
    }
    ModelSpec model = spec.model;
    if (auto* forest = std::get_if<ForestSpec>(&model)) forest->seed ^= config.seed + i;
    TrainedClassifier classifier = fit_classifier(spec.cleaning, spec.features, model, train, labels,
                                                  "rotation_iteration=" + std::to_string(i));
    for (std::size_t p = 0; p < pool.size(); ++p) {
      std::size_t b = batch_of[p];
      if (b == i) continue;
      result.scores[p].iteration_scores[i < b ? i : i - 1] = classifier.score_tokens(pool_tokens[p]);
    }
  }

  for (UnlabeledScore& s : result.scores) {
    double sum = 0.0;
    for (double v : s.iteration_scores) sum += v;
    s.mean_score = sum / static_cast<double>(s.iteration_scores.size());
  }
  for (const auto& batch : members) {
    std::vector<std::string> ids;
    for (std::size_t p : batch) ids.push_back(pool[p].id);
    result.batches.push_back(std::move(ids));
  }
  return result;
}

std::string scores_csv(const std::vector<UnlabeledScore>& scores) {
  std::ostringstream out;
  std::size_t slots = scores.empty() ? 0 : scores.front().iteration_scores.size();
  std::vector<std::string> header{"bill_id"};
  for (std::size_t k = 0; k < slots; ++k) header.push_back("score_iter_" + std::to_string(k));
  header.push_back("mean_score");
  csv::write_row(out, header);
  for (const UnlabeledScore& s : scores) {
    if (s.iteration_scores.size() != slots) throw ContractError("inconsistent iteration score counts");
    std::vector<std::string> row{s.bill_id};
    for (double v : s.iteration_scores) row.push_back(csv::format_double(v));
    row.push_back(csv::format_double(s.mean_score));
    csv::write_row(out, row);
  }
  return out.str();
}

QuarterSeries quarter_trend(const std::vector<UnlabeledScore>& scores, const Corpus& corpus,
                            std::vector<double> thresholds) {
  check_thresholds(thresholds);
  auto index = index_by_id(corpus);
  std::map<std::pair<int, unsigned>, std::vector<double>> groups;
  QuarterSeries series;
  for (const UnlabeledScore& s : scores) {
    auto it = index.find(s.bill_id);
    if (it == index.end()) throw ContractError("scored bill '" + s.bill_id + "' is not in the corpus");
    const auto& date = corpus[it->second].introduced_date;
    if (!date) {
      ++series.undated_excluded;
      continue;
    }
    groups[{date->year, date->quarter()}].push_back(s.mean_score);
  }
  for (const auto& [key, values] : groups) {
    series.points.push_back({key.first, key.second, values.size(), shares_above(values, thresholds)});
  }
  series.thresholds = std::move(thresholds);
  return series;
}

std::string quarter_series_csv(const QuarterSeries& series) {
  std::ostringstream out;
  std::vector<std::string> header{"year", "quarter", "n_bills"};
  for (double t : series.thresholds) header.push_back(threshold_column(t));
  csv::write_row(out, header);
  for (const QuarterPoint& p : series.points) {
    std::vector<std::string> row{std::to_string(p.year), std::to_string(p.quarter), std::to_string(p.n_bills)};
    for (double v : p.shares) row.push_back(csv::format_double(v));
    csv::write_row(out, row);
  }
  out << "# undated_excluded=" << series.undated_excluded << "\n";
  return out.str();
}

SubjectProportions subject_table(const std::vector<UnlabeledScore>& scores, const Corpus& corpus,
                                 std::vector<double> thresholds) {
  check_thresholds(thresholds);
  auto index = index_by_id(corpus);
  std::map<std::string, std::vector<double>> groups;
  for (const UnlabeledScore& s : scores) {
    auto it = index.find(s.bill_id);
    if (it == index.end()) throw ContractError("scored bill '" + s.bill_id + "' is not in the corpus");
    const auto& subject = corpus[it->second].subject;
    groups[subject ? *subject : kNoSubject].push_back(s.mean_score);
  }
  SubjectProportions table;
  for (const auto& [subject, values] : groups) {
    table.rows.push_back({subject, shares_above(values, thresholds), values.size()});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const SubjectRow& a, const SubjectRow& b) {
    return a.shares.front() != b.shares.front() ? a.shares.front() > b.shares.front() : a.subject < b.subject;
  });
  table.thresholds = std::move(thresholds);
  return table;
}

std::string subject_table_csv(const SubjectProportions& table) {
  std::ostringstream out;
  std::vector<std::string> header{"subject"};
  for (double t : table.thresholds) header.push_back(threshold_column(t));
  header.push_back("n_bills");
  csv::write_row(out, header);
  for (const SubjectRow& r : table.rows) {
    std::vector<std::string> row{r.subject};
    for (double v : r.shares) row.push_back(csv::format_double(v));
    row.push_back(std::to_string(r.n_bills));
    csv::write_row(out, row);
  }
  return out.str();
}

std::vector<TopBill> top_k_report(const std::vector<UnlabeledScore>& scores, const Corpus& corpus, std::size_t k) {
  if (k == 0) throw ContractError("k must be >= 1");
  if (scores.empty()) throw ContractError("no scores to rank");
  std::vector<const UnlabeledScore*> ranked;
  for (const UnlabeledScore& s : scores) ranked.push_back(&s);
  std::sort(ranked.begin(), ranked.end(), [](const UnlabeledScore* a, const UnlabeledScore* b) {
    return a->mean_score != b->mean_score ? a->mean_score > b->mean_score : a->bill_id < b->bill_id;
  });
  if (ranked.size() > k) ranked.resize(k);

  auto index = index_by_id(corpus);
  std::vector<TopBill> top;
  for (const UnlabeledScore* s : ranked) {
    TopBill bill;
    bill.bill_name = s->bill_id;
    bill.mean_score = s->mean_score;
    auto it = index.find(s->bill_id);
    if (it != index.end()) {
      const BillDocument& doc = corpus[it->second];
      bill.title = doc.title.value_or("");
      bill.congress = doc.congress ? std::to_string(*doc.congress) : "";
      bill.subject = doc.subject.value_or("");
    }
    top.push_back(std::move(bill));
  }
  return top;
}

std::string top_bills_csv(const std::vector<TopBill>& bills) {
  std::ostringstream out;
  csv::write_row(out, {"rank", "bill_name", "title", "congress", "mean_score", "subject"});
  for (std::size_t i = 0; i < bills.size(); ++i) {
    const TopBill& b = bills[i];
    csv::write_row(out, {std::to_string(i + 1), b.bill_name, b.title, b.congress, csv::format_double(b.mean_score),
                         b.subject});
  }
  return out.str();
}

}  // namespace lobbyml
