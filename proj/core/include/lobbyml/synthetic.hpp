#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lobbyml/corpus.hpp"

namespace lobbyml {

// Planted-signal corpus for demos and directional experiments: Zipf
// background text, lobbying counts drawn from a long-tailed binned distribution,
// and signal phrases injected at a per-token rate of
// signal_scale * ln(1 + lobby_count).
struct SyntheticParams {
  std::size_t n_docs = 3000;
  std::size_t min_tokens = 300;
  std::size_t max_tokens = 600;
  std::size_t background_vocab = 5000;
  double zipf_exponent = 1.0;
  double negative_fraction = 0.5;
  // Share of documents written with an unknown lobby_count (their latent
  // count still drives signal injection).
  double unlabeled_fraction = 0.0;
  std::size_t signal_phrases = 40;
  std::size_t phrase_length = 2;
  double signal_scale = 0.002;
  std::vector<std::string> subjects{"Energy", "Health", "Taxation", "Commerce", "Transportation"};
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  Corpus documents;
  std::vector<std::string> signal_phrases;
  std::vector<std::string> background_terms;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticParams& params);

// Deterministic letters-only pseudo-word for an index; distinct indices give
// distinct words. Words never end in s, d or g so suffix rules leave them
// alone.
std::string pseudo_word(std::size_t index);

// Background-vocabulary words that survive default cleaning unchanged.
std::vector<std::string> clean_pseudo_words(std::size_t count, std::size_t skip = 0);

std::string corpus_to_jsonl(const Corpus& corpus);
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace lobbyml
