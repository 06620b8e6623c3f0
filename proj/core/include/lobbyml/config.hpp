#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lobbyml/classifier.hpp"
#include "lobbyml/corpus.hpp"
#include "lobbyml/eval.hpp"
#include "lobbyml/experiment.hpp"
#include "lobbyml/unlabeled.hpp"

namespace lobbyml {

struct RotationSettings {
  std::size_t num_batches = 5;
  LabelingScheme positive_scheme = LabelingScheme::d3();
  PoolFilters filters;
  NgramRange ngrams{1, 2};
  double C = 1.0;
  std::vector<double> trend_thresholds{0.5, 0.9};
  std::vector<double> subject_thresholds{0.5, 0.75, 0.9};
};

struct StopwordFile {
  std::string name;
  std::filesystem::path path;
};

// One JSON document drives every command. Relative paths in the file are
// resolved against the file's directory.
struct ExperimentConfig {
  std::filesystem::path bills;
  std::optional<std::filesystem::path> lobby_counts;
  // Empty means the bundled english and law lists.
  std::vector<StopwordFile> stopwords;
  std::optional<std::filesystem::path> lemma_exceptions;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> model_file;

  LabelingScheme scheme = LabelingScheme::d1();
  FeatureKind features = FeatureKind::TFIDF;
  std::vector<NgramRange> ngram_search{{1, 1}, {1, 2}, {1, 3}};
  std::size_t max_features = kDefaultMaxFeatures;
  ModelFamily model = ModelFamily::Logistic;
  std::optional<ParamGrid> grid;
  std::optional<std::uint64_t> seed;
  std::size_t max_words = 150000;
  std::optional<std::size_t> max_tokens;
  // Top-k size for both feature reports and the top-bills table.
  std::size_t k = 25;
  std::optional<std::string> subject;
  RotationSettings rotation;

  static ExperimentConfig from_json(const nlohmann::json& doc,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // Seed present, referenced input paths exist, numeric ranges sane.
  void validate() const;
  // SHA-256 of the canonical JSON form of the effective config.
  std::string hash() const;

  std::filesystem::path effective_model_file() const;
  CleaningConfig cleaning() const;
  ExperimentSpec experiment_spec() const;
};

// Command-line overrides; each set field replaces the config value.
struct ConfigOverrides {
  std::optional<std::string> scheme;
  std::optional<std::string> model;
  std::optional<std::string> features;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::optional<std::string> subject;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> model_file;

  void apply(ExperimentConfig& config) const;
};

ParamGrid grid_from_json(const nlohmann::json& doc);
nlohmann::json grid_to_json(const ParamGrid& grid);

}  // namespace lobbyml
