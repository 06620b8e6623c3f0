#include "lobbyml/classifier.hpp"

#include "lobbyml/error.hpp"

namespace lobbyml {

std::string_view to_string(FeatureKind kind) { return kind == FeatureKind::BOW ? "bow" : "tfidf"; }

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "bow" || text == "BOW") return FeatureKind::BOW;
  if (text == "tfidf" || text == "TFIDF" || text == "tf-idf") return FeatureKind::TFIDF;
  throw ContractError("unknown feature kind '" + std::string(text) + "' (expected bow or tfidf)");
}

SparseVector FeaturePipeline::transform(const TokenSequence& tokens) const {
  return kind == FeatureKind::BOW ? transform_bow(tokens, features.vocabulary) : transform_tfidf(tokens, features);
}

SparseVector FeaturePipeline::featurize(std::string_view raw_text) const {
  return transform(clean(raw_text, cleaning));
}

FeaturePipeline fit_pipeline(const CleaningConfig& cleaning, const FeatureSpec& spec,
                             std::span<const TokenSequence> train_tokens) {
  FeaturePipeline pipeline;
  pipeline.cleaning = cleaning;
  pipeline.kind = spec.kind;
  Vocabulary vocab = build_vocabulary(train_tokens, spec.ngrams, spec.max_features);
  if (spec.kind == FeatureKind::TFIDF) {
    pipeline.features = fit_tfidf(train_tokens, vocab, spec.normalize);
  } else {
    pipeline.features.vocabulary = std::move(vocab);
    pipeline.features.n_docs_fitted = train_tokens.size();
    pipeline.features.normalize = false;
  }
  return pipeline;
}

std::string_view model_family(const ModelSpec& spec) {
  return std::holds_alternative<LogisticParams>(spec) ? "logistic" : "forest";
}

TrainedClassifier::TrainedClassifier(FeaturePipeline pipeline, Model model)
    : pipeline_(std::move(pipeline)), model_(std::move(model)) {
  std::size_t dim = pipeline_.vocabulary().size();
  std::size_t model_dim = std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LogisticModel>) {
          return m.weights.size();
        } else {
          return m.dimension;
        }
      },
      model_);
  if (dim != model_dim) {
    throw ContractError("model dimension " + std::to_string(model_dim) + " does not match vocabulary size " +
                        std::to_string(dim));
  }
}

std::string_view TrainedClassifier::family() const {
  return std::holds_alternative<LogisticModel>(model_) ? "logistic" : "forest";
}

double TrainedClassifier::predict_proba(const SparseVector& features) const {
  return std::visit([&](const auto& m) { return m.predict_proba(features); }, model_);
}

double TrainedClassifier::score_tokens(const TokenSequence& tokens) const {
  return predict_proba(pipeline_.transform(tokens));
}

double TrainedClassifier::score_text(std::string_view raw_text) const {
  return predict_proba(pipeline_.featurize(raw_text));
}

TrainedClassifier fit_classifier(const CleaningConfig& cleaning, const FeatureSpec& features, const ModelSpec& model,
                                 std::span<const TokenSequence> train_tokens, std::span<const int> labels,
                                 std::string trained_on) {
  if (train_tokens.size() != labels.size()) throw ContractError("documents and labels differ in count");
  FeaturePipeline pipeline = fit_pipeline(cleaning, features, train_tokens);
  std::vector<SparseVector> X;
  X.reserve(train_tokens.size());
  for (const TokenSequence& doc : train_tokens) X.push_back(pipeline.transform(doc));

  if (const auto* params = std::get_if<LogisticParams>(&model)) {
    LogisticModel trained = train_logistic(X, labels, *params);
    trained.trained_on = std::move(trained_on);
    return TrainedClassifier(std::move(pipeline), std::move(trained));
  }
  const auto& forest_spec = std::get<ForestSpec>(model);
  ForestModel trained = train_forest(X, labels, forest_spec.params, forest_spec.seed);
  trained.trained_on = std::move(trained_on);
  return TrainedClassifier(std::move(pipeline), std::move(trained));
}

}  // namespace lobbyml
