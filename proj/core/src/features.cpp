#include "lobbyml/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/hashing.hpp"

namespace lobbyml {
namespace {

void check_range(NgramRange range) {
  if (range.min < 1 || range.min > range.max) {
    throw ContractError("invalid n-gram range " + range.str() + " (need 1 <= min <= max)");
  }
}

std::size_t token_count(std::string_view ngram) {
  return static_cast<std::size_t>(std::count(ngram.begin(), ngram.end(), ' ')) + 1;
}

}  // namespace

NgramRange NgramRange::parse(std::string_view text) {
  auto sep = text.find_first_of(",-");
  if (sep == std::string_view::npos) throw ContractError("n-gram range '" + std::string(text) + "' must look like 1,2");
  NgramRange range;
  auto a = text.substr(0, sep), b = text.substr(sep + 1);
  auto ra = std::from_chars(a.data(), a.data() + a.size(), range.min);
  auto rb = std::from_chars(b.data(), b.data() + b.size(), range.max);
  if (ra.ec != std::errc() || rb.ec != std::errc() || ra.ptr != a.data() + a.size() ||
      rb.ptr != b.data() + b.size()) {
    throw ContractError("n-gram range '" + std::string(text) + "' must look like 1,2");
  }
  check_range(range);
  return range;
}

std::string NgramRange::str() const { return std::to_string(min) + "," + std::to_string(max); }

Vocabulary::Vocabulary(NgramRange range, std::size_t max_features, std::vector<std::string> terms,
                       std::vector<std::uint64_t> document_frequency)
    : range_(range), max_features_(max_features), terms_(std::move(terms)), df_(std::move(document_frequency)) {
  check_range(range_);
  if (max_features_ == 0) throw ContractError("max_features must be >= 1");
  if (terms_.size() != df_.size()) throw ContractError("vocabulary terms and document frequencies differ in length");
  if (terms_.size() > max_features_) throw ContractError("vocabulary larger than max_features");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const std::string& t = terms_[i];
    std::size_t n = t.empty() ? 0 : token_count(t);
    if (n < range_.min || n > range_.max) {
      throw ContractError("vocabulary entry '" + t + "' outside n-gram range " + range_.str());
    }
    if (!index_.emplace(t, static_cast<std::uint32_t>(i)).second) {
      throw ContractError("duplicate vocabulary entry '" + t + "'");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view ngram) const {
  auto it = index_.find(std::string(ngram));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::hash() const {
  std::string canonical = range_.str() + "|" + std::to_string(max_features_) + "\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    canonical += terms_[i];
    canonical += '\t';
    canonical += std::to_string(df_[i]);
    canonical += '\n';
  }
  return sha256_hex(canonical);
}

Vocabulary build_vocabulary(std::span<const TokenSequence> train_docs, NgramRange range,
                            std::size_t max_features) {
  check_range(range);
  if (max_features == 0) throw ContractError("max_features must be >= 1");

  std::unordered_map<std::string, std::uint64_t> df;
  std::unordered_set<std::string> seen;
  for (const TokenSequence& doc : train_docs) {
    seen.clear();
    for_each_ngram(doc, range, [&](std::string_view ngram) {
      if (seen.emplace(ngram).second) ++df[std::string(ngram)];
    });
  }
  if (df.empty()) throw ContractError("cannot build a vocabulary: every training document is empty");

  std::vector<std::pair<std::string, std::uint64_t>> ranked(df.begin(), df.end());
  auto by_df = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  if (ranked.size() > max_features) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(max_features), ranked.end(), by_df);
    ranked.resize(max_features);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::string> terms;
  std::vector<std::uint64_t> freqs;
  terms.reserve(ranked.size());
  freqs.reserve(ranked.size());
  for (auto& [term, count] : ranked) {
    terms.push_back(std::move(term));
    freqs.push_back(count);
  }
  return Vocabulary(range, max_features, std::move(terms), std::move(freqs));
}

SparseVector transform_bow(const TokenSequence& doc, const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, double> counts;
  for_each_ngram(doc, vocab.ngram_range(), [&](std::string_view ngram) {
    if (auto index = vocab.index_of(ngram)) counts[*index] += 1.0;
  });
  return SparseVector::from_pairs(vocab.size(), {counts.begin(), counts.end()});
}

double smoothed_idf(std::size_t n_docs, std::uint64_t document_frequency) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(document_frequency))) + 1.0;
}

TfIdfModel fit_tfidf(std::span<const TokenSequence> train_docs, const Vocabulary& vocab, bool normalize) {
  if (train_docs.empty()) throw ContractError("cannot fit TF-IDF on an empty corpus");
  std::vector<std::uint64_t> df(vocab.size(), 0);
  std::unordered_set<std::uint32_t> seen;
  for (const TokenSequence& doc : train_docs) {
    seen.clear();
    for_each_ngram(doc, vocab.ngram_range(), [&](std::string_view ngram) {
      if (auto index = vocab.index_of(ngram); index && seen.insert(*index).second) ++df[*index];
    });
  }
  TfIdfModel model;
  model.vocabulary = vocab;
  model.n_docs_fitted = train_docs.size();
  model.normalize = normalize;
  model.idf.reserve(vocab.size());
  for (std::uint64_t d : df) model.idf.push_back(smoothed_idf(train_docs.size(), d));
  return model;
}

SparseVector transform_tfidf(const TokenSequence& doc, const TfIdfModel& model) {
  SparseVector counts = transform_bow(doc, model.vocabulary);
  std::vector<std::pair<std::uint32_t, double>> weighted;
  weighted.reserve(counts.nnz());
  double norm_sq = 0.0;
  for (const auto& e : counts.entries()) {
    double v = e.value * model.idf[e.index];
    norm_sq += v * v;
    weighted.emplace_back(e.index, v);
  }
  if (model.normalize && norm_sq > 0.0) {
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [index, v] : weighted) v *= inv;
  }
  return SparseVector::from_pairs(model.vocabulary.size(), std::move(weighted));
}

std::string vocabulary_csv(const Vocabulary& vocab, std::span<const double> idf) {
  std::ostringstream out;
  csv::write_row(out, {"ngram", "index", "df", "idf"});
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    csv::write_row(out, {vocab.terms()[i], std::to_string(i), std::to_string(vocab.document_frequencies()[i]),
                         i < idf.size() ? csv::format_double(idf[i]) : std::string()});
  }
  return out.str();
}

}  // namespace lobbyml
