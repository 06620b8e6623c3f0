#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lobbyml {

enum class BillType { HR, S, HRes, SRes, HConRes, SConRes, HJRes, SJRes };

std::string_view to_string(BillType type);
// Accepts the congress.gov spellings ("H.R.", "S.J.Res.", ...).
std::optional<BillType> parse_bill_type(std::string_view text);

struct Date {
  int year = 0;
  unsigned month = 1;
  unsigned day = 1;

  // Strict YYYY-MM-DD with calendar validation.
  static std::optional<Date> parse_iso(std::string_view text);
  std::string iso() const;
  unsigned quarter() const { return (month - 1) / 3 + 1; }

  auto operator<=>(const Date&) const = default;
};

struct BillDocument {
  std::string id;
  std::optional<BillType> bill_type;
  std::optional<int> congress;
  std::optional<std::string> title;
  std::optional<std::string> subject;
  std::optional<Date> introduced_date;
  std::string raw_text;
  std::size_t word_count = 0;
  // nullopt means "unknown" (unlabeled pool), which is distinct from 0.
  std::optional<std::uint64_t> lobby_count;
};

using Corpus = std::vector<BillDocument>;

// Number of whitespace-separated tokens.
std::size_t count_words(std::string_view text);

// One JSON object per line; blank lines are skipped. `source` names the
// input in error messages.
Corpus parse_corpus(std::istream& in, const std::string& source = "<stream>");
Corpus ingest_corpus(const std::filesystem::path& path);

// CSV with header bill_id,count.
std::unordered_map<std::string, std::uint64_t> read_lobby_counts(
    const std::filesystem::path& path);
std::unordered_map<std::string, std::uint64_t> parse_lobby_counts(
    std::istream& in, const std::string& source = "<stream>");

struct MergeSummary {
  std::size_t merged = 0;
  std::size_t unmatched_ids = 0;
};

// Fills lobby_count from an external table keyed by bill id. A count that
// disagrees with one already present in the document is an error.
MergeSummary merge_lobby_counts(Corpus& corpus,
                                const std::unordered_map<std::string, std::uint64_t>& counts);

// Keeps documents with word_count <= max_words, preserving order.
Corpus apply_length_filter(const Corpus& corpus, std::size_t max_words);

enum class SchemeId { D1, D2, D3, Custom };

struct LabelingScheme {
  SchemeId id = SchemeId::D1;
  std::uint64_t positive_min = 1;

  static LabelingScheme d1() { return {SchemeId::D1, 1}; }
  static LabelingScheme d2() { return {SchemeId::D2, 10}; }
  static LabelingScheme d3() { return {SchemeId::D3, 50}; }
  static LabelingScheme custom(std::uint64_t positive_min);
  // "D1" | "D2" | "D3" | "min=<n>"
  static LabelingScheme parse(std::string_view text);

  std::string name() const;
  bool operator==(const LabelingScheme&) const = default;
};

struct LabeledExample {
  std::string bill_id;
  int label = 0;
  bool operator==(const LabeledExample&) const = default;
};

struct LabeledDataset {
  LabelingScheme scheme;
  std::vector<LabeledExample> examples;
  // Bills with 0 < lobby_count < positive_min.
  std::vector<std::string> excluded_ids;

  std::size_t positives() const;
  std::size_t negatives() const { return examples.size() - positives(); }
};

// Label 1 iff lobby_count >= positive_min, label 0 iff lobby_count == 0,
// otherwise excluded. Unknown counts are an error.
LabeledDataset build_labeled_dataset(const Corpus& corpus, const LabelingScheme& scheme);

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
};

inline constexpr double kTrainFraction = 0.72;
inline constexpr double kValidationFraction = 0.08;

// Label-stratified 72/8/20 partition. |train| = round(0.72 n),
// |validation| = round(0.08 n), test takes the remainder. Requires n >= 10.
DatasetSplit split_dataset(const LabeledDataset& labeled, std::uint64_t seed);

// Lobbying-intensity bins: exactly 0, then (lo, hi] for consecutive edges.
inline const std::vector<std::uint64_t> kIntensityBinEdges = {
    0, 1, 5, 10, 50, 100, 200, 500, 1000, 10000000};

struct Histogram {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  std::size_t unknown = 0;

  std::size_t total() const;
};

// Bins: "<=e0" (written "0" when e0 == 0), (e_i, e_i+1] for each pair of
// consecutive edges, and an overflow bin above the last edge. Unknown counts
// go to the separate `unknown` bucket. Edges must be strictly ascending.
Histogram intensity_histogram(const Corpus& corpus, const std::vector<std::uint64_t>& bin_edges);

// Same binning applied to word counts.
Histogram word_count_histogram(const Corpus& corpus, const std::vector<std::uint64_t>& bin_edges);

// CSV with header bin,count; the unknown bucket is the last row when
// include_unknown is set.
std::string histogram_csv(const Histogram& histogram, bool include_unknown = true);

// Index from bill id to position in the corpus.
std::unordered_map<std::string, std::size_t> index_by_id(const Corpus& corpus);

}  // namespace lobbyml
