#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lobbyml/classifier.hpp"
#include "lobbyml/corpus.hpp"

namespace lobbyml {

struct PoolFilters {
  int min_year = 1990;
  std::size_t min_words = 2000;
};

struct RotationConfig {
  std::size_t num_batches = 5;
  std::uint64_t seed = 0;
  LabelingScheme positive_scheme = LabelingScheme::d3();
  PoolFilters pool_filters;
};

struct PoolResult {
  Corpus pool;
  std::size_t excluded_known_count = 0;
  std::size_t excluded_undated = 0;
  std::size_t excluded_year = 0;
  std::size_t excluded_short = 0;
};

// Unknown lobby_count, dated, year >= min_year, word_count >= min_words.
PoolResult filter_pool(const Corpus& all_bills, const PoolFilters& filters);

// Bills whose known lobby_count reaches the scheme's positive threshold.
Corpus select_positives(const Corpus& all_bills, const LabelingScheme& scheme);

struct UnlabeledScore {
  std::string bill_id;
  std::size_t batch = 0;
  // Slot k holds the prediction of iteration k (k < batch) or k + 1
  // (k >= batch); the bill's own batch never scores it.
  std::vector<double> iteration_scores;
  double mean_score = 0.0;
};

// Iteration that fills slot `slot` of a bill in batch `batch`.
inline std::size_t slot_iteration(std::size_t slot, std::size_t batch) {
  return slot < batch ? slot : slot + 1;
}

struct RotationModelSpec {
  CleaningConfig cleaning = CleaningConfig::standard();
  FeatureSpec features;
  ModelSpec model = LogisticParams{};
};

struct RotationResult {
  std::vector<UnlabeledScore> scores;          // pool order
  std::vector<std::vector<std::string>> batches;  // ids per batch / iteration negatives
};

// Shuffles the pool with config.seed into num_batches batches whose sizes
// differ by at most one. Iteration i fits a fresh pipeline and model on
// positives (label 1) plus batch i (label 0) and scores every pool bill
// outside batch i.
RotationResult rotation_score(const Corpus& positives, const Corpus& pool,
                              const RotationConfig& config, const RotationModelSpec& spec);

// bill_id,score_iter_0..score_iter_{B-2},mean_score
std::string scores_csv(const std::vector<UnlabeledScore>& scores);

struct QuarterPoint {
  int year = 0;
  unsigned quarter = 1;
  std::size_t n_bills = 0;
  std::vector<double> shares;  // one per threshold, strict >
};

struct QuarterSeries {
  std::vector<double> thresholds;
  std::vector<QuarterPoint> points;  // chronological, empty quarters omitted
  std::size_t undated_excluded = 0;
};

QuarterSeries quarter_trend(const std::vector<UnlabeledScore>& scores, const Corpus& corpus,
                            std::vector<double> thresholds = {0.5, 0.9});

std::string quarter_series_csv(const QuarterSeries& series);

struct SubjectRow {
  std::string subject;
  std::vector<double> shares;  // one per threshold, strict >
  std::size_t n_bills = 0;
};

struct SubjectProportions {
  std::vector<double> thresholds;
  std::vector<SubjectRow> rows;  // descending by the first share, then by name
};

inline constexpr const char* kNoSubject = "(none)";

SubjectProportions subject_table(const std::vector<UnlabeledScore>& scores, const Corpus& corpus,
                                 std::vector<double> thresholds = {0.5, 0.75, 0.9});

std::string subject_table_csv(const SubjectProportions& table);

struct TopBill {
  std::string bill_name;
  std::string title;
  std::string congress;
  double mean_score = 0.0;
  std::string subject;
};

// k highest mean scores, ties by bill id.
std::vector<TopBill> top_k_report(const std::vector<UnlabeledScore>& scores, const Corpus& corpus,
                                  std::size_t k = 25);

std::string top_bills_csv(const std::vector<TopBill>& bills);

}  // namespace lobbyml
