#include "lobbyml/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/random.hpp"
#include "lobbyml/textprep.hpp"

namespace lobbyml {
namespace {

constexpr std::string_view kConsonants = "bcfhjklmnprtvwz";
constexpr std::string_view kVowels = "aeiou";

// Count bins for lobbied bills with their relative frequencies; the
// open-ended top bin is capped.
struct CountBin {
  std::uint64_t lo, hi;
  double weight;
};
constexpr std::array<CountBin, 8> kCountBins{{{1, 5, 18511},
                                              {6, 10, 7338},
                                              {11, 50, 14924},
                                              {51, 100, 5072},
                                              {101, 200, 3836},
                                              {201, 500, 3003},
                                              {501, 1000, 1136},
                                              {1001, 5000, 893}}};

std::uint64_t draw_count(Rng& rng) {
  double total = 0.0;
  for (const CountBin& b : kCountBins) total += b.weight;
  double u = rng.uniform01() * total;
  for (const CountBin& b : kCountBins) {
    if (u < b.weight) return b.lo + rng.uniform_index(b.hi - b.lo + 1);
    u -= b.weight;
  }
  const CountBin& last = kCountBins.back();
  return last.lo + rng.uniform_index(last.hi - last.lo + 1);
}

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cumulative_(n) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cumulative_[r] = acc;
    }
  }
  std::size_t operator()(Rng& rng) const {
    double u = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

std::string pseudo_word(std::size_t index) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  // Offsetting by `base` guarantees at least two syllables and keeps the
  // positional encoding injective.
  std::size_t n = index + base;
  std::string reversed;
  while (n > 0) {
    std::size_t digit = n % base;
    reversed.push_back(kVowels[digit % kVowels.size()]);
    reversed.push_back(kConsonants[digit / kVowels.size()]);
    n /= base;
  }
  return {reversed.rbegin(), reversed.rend()};
}

std::vector<std::string> clean_pseudo_words(std::size_t count, std::size_t skip) {
  static const CleaningConfig cleaning = CleaningConfig::standard();
  std::vector<std::string> words;
  std::size_t accepted = 0;
  for (std::size_t i = 0; words.size() < count; ++i) {
    std::string w = pseudo_word(i);
    TokenSequence cleaned = clean(w, cleaning);
    if (cleaned.size() != 1 || cleaned.front() != w) continue;
    if (accepted++ < skip) continue;
    words.push_back(std::move(w));
  }
  return words;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticParams& params) {
  if (params.n_docs == 0) throw ContractError("n_docs must be positive");
  if (params.min_tokens == 0 || params.min_tokens > params.max_tokens) {
    throw ContractError("token range must satisfy 0 < min_tokens <= max_tokens");
  }
  if (params.background_vocab == 0 || params.signal_phrases == 0 || params.phrase_length == 0) {
    throw ContractError("vocabulary sizes must be positive");
  }
  if (params.subjects.empty()) throw ContractError("at least one subject is required");

  SyntheticCorpus out;
  const std::size_t signal_words = params.signal_phrases * params.phrase_length;
  std::vector<std::string> words = clean_pseudo_words(params.background_vocab + signal_words);
  out.background_terms.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(params.background_vocab));
  for (std::size_t p = 0; p < params.signal_phrases; ++p) {
    std::string phrase;
    for (std::size_t j = 0; j < params.phrase_length; ++j) {
      if (j) phrase.push_back(' ');
      phrase += words[params.background_vocab + p * params.phrase_length + j];
    }
    out.signal_phrases.push_back(std::move(phrase));
  }

  Rng rng(params.seed);
  ZipfSampler zipf(params.background_vocab, params.zipf_exponent);
  for (std::size_t d = 0; d < params.n_docs; ++d) {
    BillDocument doc;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", d);
    doc.id = id;
    doc.bill_type = rng.bernoulli(0.5) ? BillType::HR : BillType::S;
    int congress = 101 + static_cast<int>(rng.uniform_index(15));
    doc.congress = congress;
    doc.introduced_date = Date{1787 + 2 * congress + static_cast<int>(rng.uniform_index(2)),
                               static_cast<unsigned>(1 + rng.uniform_index(12)),
                               static_cast<unsigned>(1 + rng.uniform_index(28))};
    doc.subject = params.subjects[rng.uniform_index(params.subjects.size())];
    doc.title = "Synthetic bill " + std::to_string(d);

    std::uint64_t count = rng.bernoulli(params.negative_fraction) ? 0 : draw_count(rng);
    bool unlabeled = rng.bernoulli(params.unlabeled_fraction);
    if (!unlabeled) doc.lobby_count = count;

    const double rate = std::min(0.5, params.signal_scale * std::log1p(static_cast<double>(count)));
    std::size_t target = params.min_tokens + rng.uniform_index(params.max_tokens - params.min_tokens + 1);
    std::string text;
    std::size_t tokens = 0;
    while (tokens < target) {
      if (!text.empty()) text.push_back(' ');
      if (rate > 0.0 && rng.bernoulli(rate)) {
        text += out.signal_phrases[rng.uniform_index(out.signal_phrases.size())];
        tokens += params.phrase_length;
      } else {
        text += out.background_terms[zipf(rng)];
        ++tokens;
      }
    }
    doc.raw_text = std::move(text);
    doc.word_count = tokens;
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const BillDocument& doc : corpus) {
    nlohmann::ordered_json obj;
    obj["id"] = doc.id;
    if (doc.bill_type) obj["bill_type"] = std::string(to_string(*doc.bill_type));
    if (doc.congress) obj["congress"] = *doc.congress;
    if (doc.title) obj["title"] = *doc.title;
    if (doc.subject) obj["subject"] = *doc.subject;
    if (doc.introduced_date) obj["introduced_date"] = doc.introduced_date->iso();
    if (doc.lobby_count) {
      obj["lobby_count"] = *doc.lobby_count;
    } else {
      obj["lobby_count"] = "unknown";
    }
    obj["text"] = doc.raw_text;
    out << obj.dump() << "\n";
  }
  return out.str();
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  csv::write_file(path, corpus_to_jsonl(corpus));
}

}  // namespace lobbyml
