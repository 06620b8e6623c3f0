#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lobbyml/sparse_vector.hpp"
#include "lobbyml/textprep.hpp"

namespace lobbyml {

struct NgramRange {
  std::size_t min = 1;
  std::size_t max = 1;

  // "1,2" or "1-2"
  static NgramRange parse(std::string_view text);
  std::string str() const;
  bool operator==(const NgramRange&) const = default;
};

inline constexpr std::size_t kDefaultMaxFeatures = 25000;

// Calls fn(ngram) for every n-gram occurrence of length within range, in
// document order, shorter n first at each position. N-grams are tokens joined
// by single spaces.
template <typename Fn>
void for_each_ngram(const TokenSequence& tokens, NgramRange range, Fn&& fn) {
  std::string buffer;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    buffer.clear();
    for (std::size_t n = 1; n <= range.max && start + n <= tokens.size(); ++n) {
      if (n > 1) buffer.push_back(' ');
      buffer += tokens[start + n - 1];
      if (n >= range.min) fn(std::string_view(buffer));
    }
  }
}

class Vocabulary {
 public:
  Vocabulary() = default;
  // Explicit entries: terms are assigned indices in the order given.
  Vocabulary(NgramRange range, std::size_t max_features, std::vector<std::string> terms,
             std::vector<std::uint64_t> document_frequency);

  NgramRange ngram_range() const { return range_; }
  std::size_t max_features() const { return max_features_; }
  std::size_t size() const { return terms_.size(); }

  std::optional<std::uint32_t> index_of(std::string_view ngram) const;
  const std::string& term(std::uint32_t index) const { return terms_.at(index); }
  std::uint64_t document_frequency(std::uint32_t index) const { return df_.at(index); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint64_t>& document_frequencies() const { return df_; }

  std::string hash() const;

 private:
  NgramRange range_;
  std::size_t max_features_ = kDefaultMaxFeatures;
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Keeps the max_features n-grams with the highest document frequency (ties
// lexicographic); selected terms are indexed in lexicographic order.
Vocabulary build_vocabulary(std::span<const TokenSequence> train_docs, NgramRange range,
                            std::size_t max_features = kDefaultMaxFeatures);

// Raw in-vocabulary n-gram counts.
SparseVector transform_bow(const TokenSequence& doc, const Vocabulary& vocab);

struct TfIdfModel {
  Vocabulary vocabulary;
  // idf[t] = ln((1 + n_docs) / (1 + df_t)) + 1
  std::vector<double> idf;
  std::size_t n_docs_fitted = 0;
  bool normalize = true;
};

double smoothed_idf(std::size_t n_docs, std::uint64_t document_frequency);

TfIdfModel fit_tfidf(std::span<const TokenSequence> train_docs, const Vocabulary& vocab,
                     bool normalize = true);

// count * idf, then L2-normalized when enabled; zero vectors stay zero.
SparseVector transform_tfidf(const TokenSequence& doc, const TfIdfModel& model);

// ngram,index,df,idf (idf column empty when idf is empty).
std::string vocabulary_csv(const Vocabulary& vocab, std::span<const double> idf = {});

}  // namespace lobbyml
