#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lobbyml/classifier.hpp"
#include "lobbyml/corpus.hpp"
#include "lobbyml/eval.hpp"

namespace lobbyml {

enum class ModelFamily { Logistic, Forest };

std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view text);

struct ExperimentSpec {
  LabelingScheme scheme = LabelingScheme::d1();
  CleaningConfig cleaning = CleaningConfig::standard();
  FeatureKind feature_kind = FeatureKind::TFIDF;
  std::vector<NgramRange> ngram_search{{1, 1}, {1, 2}, {1, 3}};
  std::size_t max_features = kDefaultMaxFeatures;
  ModelFamily family = ModelFamily::Logistic;
  // Model hyperparameters. An "ngram" axis is added from ngram_search.
  ParamGrid grid;
  std::uint64_t seed = 0;
};

// Default lattices: logistic {C, penalty}; forest {criterion, max_depth,
// min_samples_leaf, min_samples_split}.
ParamGrid default_grid(ModelFamily family);

// Builds the model spec for one lattice point; unknown keys are rejected.
ModelSpec model_spec_from_params(ModelFamily family, const ParamPoint& params, std::uint64_t seed);
FeatureSpec feature_spec_from_params(const ExperimentSpec& spec, const ParamPoint& params);

struct ExperimentResult {
  LabelingScheme scheme;
  std::size_t n_train = 0, n_validation = 0, n_test = 0;
  std::size_t n_excluded = 0;
  GridSearchResult search;
  ThresholdResult threshold;
  double val_auc = 0.0, val_acc = 0.0;
  double test_auc = 0.0, test_acc = 0.0;
  std::optional<TrainedClassifier> classifier;
  // Selected model's probability for each test bill, in split order.
  std::vector<std::pair<std::string, double>> test_predictions;
};

// split -> grid search on validation AUC -> validation threshold -> one
// pass over test.
ExperimentResult run_experiment(const Corpus& corpus, const ExperimentSpec& spec);

// scheme,model,feature_kind,params,val_auc,val_acc,test_auc,test_acc,threshold
std::string report_header_csv();
std::string report_row_csv(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace lobbyml
