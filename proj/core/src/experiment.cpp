#include "lobbyml/experiment.hpp"

#include <sstream>
#include <unordered_map>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"

namespace lobbyml {
namespace {

constexpr const char* kNgramKey = "ngram";

std::size_t positive_size(const ParamValue& value, const std::string& name) {
  std::int64_t v = as_int(value);
  if (v < 1) throw ContractError("parameter '" + name + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view to_string(ModelFamily family) { return family == ModelFamily::Logistic ? "logistic" : "forest"; }

ModelFamily parse_model_family(std::string_view text) {
  if (text == "logistic") return ModelFamily::Logistic;
  if (text == "forest") return ModelFamily::Forest;
  throw ContractError("unknown model '" + std::string(text) + "' (expected logistic or forest)");
}

ParamGrid default_grid(ModelFamily family) {
  if (family == ModelFamily::Logistic) {
    return {{"C", {0.01, 0.1, 1.0, 10.0, 100.0}}, {"penalty", {std::string("l1"), std::string("l2")}}};
  }
  return {{"criterion", {std::string("gini"), std::string("entropy")}},
          {"max_depth", {std::int64_t{0}, std::int64_t{20}}},
          {"min_samples_leaf", {std::int64_t{1}, std::int64_t{5}}},
          {"min_samples_split", {std::int64_t{2}, std::int64_t{10}}}};
}

ModelSpec model_spec_from_params(ModelFamily family, const ParamPoint& params, std::uint64_t seed) {
  if (family == ModelFamily::Logistic) {
    LogisticParams p;
    for (const auto& [name, value] : params) {
      if (name == kNgramKey) continue;
      if (name == "C") {
        p.C = as_double(value);
        if (!(p.C > 0.0)) throw ContractError("C must be positive");
      } else if (name == "penalty") {
        p.penalty = parse_penalty(as_string(value));
      } else if (name == "tol") {
        p.tol = as_double(value);
      } else if (name == "max_iter") {
        p.max_iter = static_cast<int>(positive_size(value, name));
      } else {
        throw ContractError("unknown logistic parameter '" + name + "'");
      }
    }
    return p;
  }
  ForestSpec spec;
  spec.seed = seed;
  for (const auto& [name, value] : params) {
    if (name == kNgramKey) continue;
    if (name == "n_trees") {
      spec.params.n_trees = positive_size(value, name);
    } else if (name == "max_depth") {
      std::int64_t depth = as_int(value);
      if (depth < 0) throw ContractError("max_depth must be >= 0 (0 = unlimited)");
      if (depth > 0) spec.params.max_depth = static_cast<std::size_t>(depth);
    } else if (name == "criterion") {
      spec.params.criterion = parse_criterion(as_string(value));
    } else if (name == "min_samples_split") {
      spec.params.min_samples_split = positive_size(value, name);
    } else if (name == "min_samples_leaf") {
      spec.params.min_samples_leaf = positive_size(value, name);
    } else if (name == "features_per_split") {
      spec.params.features_per_split = positive_size(value, name);
    } else {
      throw ContractError("unknown forest parameter '" + name + "'");
    }
  }
  return spec;
}

FeatureSpec feature_spec_from_params(const ExperimentSpec& spec, const ParamPoint& params) {
  FeatureSpec features;
  features.kind = spec.feature_kind;
  features.max_features = spec.max_features;
  features.ngrams = spec.ngram_search.empty() ? NgramRange{1, 1} : spec.ngram_search.front();
  if (auto it = params.find(kNgramKey); it != params.end()) features.ngrams = NgramRange::parse(as_string(it->second));
  return features;
}

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentSpec& spec) {
  spec.cleaning.validate();
  Corpus known;
  for (const BillDocument& doc : corpus) {
    if (doc.lobby_count) known.push_back(doc);
  }
  LabeledDataset labeled = build_labeled_dataset(known, spec.scheme);
  if (labeled.positives() == 0) {
    throw ContractError("no positives under scheme " + spec.scheme.name() + " (need lobby_count >= " +
                        std::to_string(spec.scheme.positive_min) + ")");
  }
  if (labeled.negatives() == 0) throw ContractError("no negatives (lobby_count == 0) in the corpus");
  DatasetSplit split = split_dataset(labeled, spec.seed);

  std::unordered_map<std::string, std::size_t> index = index_by_id(known);
  auto tokens_of = [&](const std::vector<LabeledExample>& part, std::vector<TokenSequence>& tokens,
                       std::vector<int>& labels) {
    for (const LabeledExample& e : part) {
      tokens.push_back(clean(known[index.at(e.bill_id)].raw_text, spec.cleaning));
      labels.push_back(e.label);
    }
  };
  std::vector<TokenSequence> train_tokens, val_tokens, test_tokens;
  std::vector<int> train_labels, val_labels, test_labels;
  tokens_of(split.train, train_tokens, train_labels);
  tokens_of(split.validation, val_tokens, val_labels);
  tokens_of(split.test, test_tokens, test_labels);

  ParamGrid grid = spec.grid.empty() ? default_grid(spec.family) : spec.grid;
  std::vector<ParamValue> ngram_axis;
  for (const NgramRange& r : spec.ngram_search) ngram_axis.emplace_back(r.str());
  if (ngram_axis.empty()) ngram_axis.emplace_back(NgramRange{1, 1}.str());
  grid[kNgramKey] = std::move(ngram_axis);

  auto score_all = [](const TrainedClassifier& c, const std::vector<TokenSequence>& docs,
                      const std::vector<int>& labels) {
    ScoredSet scored;
    for (std::size_t i = 0; i < docs.size(); ++i) scored.add(c.score_tokens(docs[i]), labels[i]);
    return scored;
  };

  ExperimentResult result;
  result.scheme = spec.scheme;
  result.n_train = split.train.size();
  result.n_validation = split.validation.size();
  result.n_test = split.test.size();
  result.n_excluded = labeled.excluded_ids.size();

  std::optional<ScoredSet> best_val;
  double best_auc = 0.0;
  std::string trained_on = spec.scheme.name() + ":seed=" + std::to_string(spec.seed);
  result.search = grid_search(grid, [&](const ParamPoint& params) {
    TrainedClassifier classifier =
        fit_classifier(spec.cleaning, feature_spec_from_params(spec, params),
                       model_spec_from_params(spec.family, params, spec.seed), train_tokens, train_labels, trained_on);
    ScoredSet val = score_all(classifier, val_tokens, val_labels);
    double auc = roc_auc(val);
    if (!best_val || auc > best_auc) {
      best_auc = auc;
      best_val = val;
      result.classifier.emplace(std::move(classifier));
    }
    return val;
  });

  result.val_auc = result.search.best_val_auc;
  result.threshold = best_threshold(*best_val);
  result.val_acc = result.threshold.accuracy;
  ScoredSet test = score_all(*result.classifier, test_tokens, test_labels);
  result.test_auc = roc_auc(test);
  result.test_acc = accuracy(test, result.threshold.threshold);
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    result.test_predictions.emplace_back(split.test[i].bill_id, test.scores[i]);
  }
  return result;
}

std::string report_header_csv() {
  std::ostringstream out;
  out << "# val_acc and test_acc are measured at the threshold chosen on the validation split\n";
  csv::write_row(out, {"scheme", "model", "feature_kind", "params", "val_auc", "val_acc", "test_auc", "test_acc",
                       "threshold"});
  return out.str();
}

std::string report_row_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::ostringstream out;
  csv::write_row(out, {result.scheme.name(), std::string(to_string(spec.family)),
                       std::string(to_string(spec.feature_kind)), to_string(result.search.best_params),
                       csv::format_double(result.val_auc), csv::format_double(result.val_acc),
                       csv::format_double(result.test_auc), csv::format_double(result.test_acc),
                       csv::format_double(result.threshold.threshold)});
  return out.str();
}

}  // namespace lobbyml
