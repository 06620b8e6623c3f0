#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lobbyml/features.hpp"
#include "lobbyml/forest.hpp"
#include "lobbyml/logistic.hpp"
#include "lobbyml/textprep.hpp"

namespace lobbyml {

enum class FeatureKind { BOW, TFIDF };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureSpec {
  FeatureKind kind = FeatureKind::TFIDF;
  NgramRange ngrams{1, 1};
  std::size_t max_features = kDefaultMaxFeatures;
  bool normalize = true;
};

// Everything needed to turn raw bill text into the model's input vector.
struct FeaturePipeline {
  CleaningConfig cleaning;
  FeatureKind kind = FeatureKind::TFIDF;
  TfIdfModel features;  // idf is empty for BOW

  const Vocabulary& vocabulary() const { return features.vocabulary; }
  SparseVector transform(const TokenSequence& tokens) const;
  SparseVector featurize(std::string_view raw_text) const;
};

// Fits vocabulary (and idf for TF-IDF) on already-cleaned training tokens.
FeaturePipeline fit_pipeline(const CleaningConfig& cleaning, const FeatureSpec& spec,
                             std::span<const TokenSequence> train_tokens);

struct ForestSpec {
  ForestParams params;
  std::uint64_t seed = 0;
};

using ModelSpec = std::variant<LogisticParams, ForestSpec>;

std::string_view model_family(const ModelSpec& spec);

class TrainedClassifier {
 public:
  using Model = std::variant<LogisticModel, ForestModel>;

  TrainedClassifier(FeaturePipeline pipeline, Model model);

  const FeaturePipeline& pipeline() const { return pipeline_; }
  const Model& model() const { return model_; }
  std::string_view family() const;

  // Throws ContractError when the vector dimension differs from the model's.
  double predict_proba(const SparseVector& features) const;
  double score_tokens(const TokenSequence& tokens) const;
  double score_text(std::string_view raw_text) const;

  std::string cleaning_hash() const { return pipeline_.cleaning.hash(); }
  std::string vocabulary_hash() const { return pipeline_.vocabulary().hash(); }

 private:
  FeaturePipeline pipeline_;
  Model model_;
};

// Fits the feature pipeline on train_tokens, then the model on the
// resulting vectors.
TrainedClassifier fit_classifier(const CleaningConfig& cleaning, const FeatureSpec& features,
                                 const ModelSpec& model, std::span<const TokenSequence> train_tokens,
                                 std::span<const int> labels, std::string trained_on = {});

inline constexpr int kModelFormatVersion = 1;

void save_model(const TrainedClassifier& classifier, const std::filesystem::path& path);
TrainedClassifier load_model(const std::filesystem::path& path);

std::string model_to_json(const TrainedClassifier& classifier);
TrainedClassifier model_from_json(std::string_view text);

}  // namespace lobbyml
