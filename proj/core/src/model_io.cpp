#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lobbyml/classifier.hpp"
#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"

namespace lobbyml {
namespace {

using json = nlohmann::json;

json cleaning_to_json(const CleaningConfig& c) {
  json lists = json::array();
  for (const StopwordSet& set : c.stopword_lists) lists.push_back({{"name", set.name}, {"words", set.words}});
  return {
      {"lowercase", c.lowercase},
      {"strip_numbers", c.strip_numbers},
      {"strip_punctuation", c.strip_punctuation},
      {"lemmatize", c.lemmatize},
      {"max_tokens", c.max_tokens ? json(*c.max_tokens) : json(nullptr)},
      {"stopword_lists", std::move(lists)},
      {"lemma_exceptions", c.lemmatizer.exceptions()},
  };
}

CleaningConfig cleaning_from_json(const json& j) {
  CleaningConfig c;
  c.lowercase = j.at("lowercase").get<bool>();
  c.strip_numbers = j.at("strip_numbers").get<bool>();
  c.strip_punctuation = j.at("strip_punctuation").get<bool>();
  c.lemmatize = j.at("lemmatize").get<bool>();
  if (!j.at("max_tokens").is_null()) c.max_tokens = j.at("max_tokens").get<std::size_t>();
  for (const json& set : j.at("stopword_lists")) {
    c.stopword_lists.push_back({set.at("name").get<std::string>(), set.at("words").get<std::set<std::string>>()});
  }
  c.lemmatizer = Lemmatizer(j.at("lemma_exceptions").get<std::map<std::string, std::string>>());
  c.validate();
  return c;
}

json params_to_json(const ForestParams& p) {
  return {
      {"n_trees", p.n_trees},
      {"max_depth", p.max_depth ? json(*p.max_depth) : json(nullptr)},
      {"criterion", to_string(p.criterion)},
      {"min_samples_split", p.min_samples_split},
      {"min_samples_leaf", p.min_samples_leaf},
      {"features_per_split", p.features_per_split ? json(*p.features_per_split) : json(nullptr)},
      {"bootstrap", p.bootstrap},
  };
}

ForestParams params_from_json(const json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<std::size_t>();
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::size_t>();
  p.criterion = parse_criterion(j.at("criterion").get<std::string>());
  p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  if (!j.at("features_per_split").is_null()) p.features_per_split = j.at("features_per_split").get<std::size_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  return p;
}

json model_to_json_value(const LogisticModel& m) {
  json weights = json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    if (m.weights[i] != 0.0) weights.push_back(json::array({i, m.weights[i]}));
  }
  return {{"penalty", to_string(m.penalty)}, {"C", m.C},           {"trained_on", m.trained_on},
          {"bias", m.bias},                  {"dimension", m.weights.size()}, {"weights", std::move(weights)}};
}

json model_to_json_value(const ForestModel& m) {
  json trees = json::array();
  for (const DecisionTree& tree : m.trees) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         value = json::array();
    for (const TreeNode& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      value.push_back(node.value);
    }
    trees.push_back({{"feature", std::move(feature)},
                     {"threshold", std::move(threshold)},
                     {"left", std::move(left)},
                     {"right", std::move(right)},
                     {"value", std::move(value)}});
  }
  return {{"params", params_to_json(m.params)},
          {"seed", m.seed},
          {"dimension", m.dimension},
          {"trained_on", m.trained_on},
          {"trees", std::move(trees)}};
}

LogisticModel logistic_from_json(const json& j) {
  LogisticModel m;
  m.penalty = parse_penalty(j.at("penalty").get<std::string>());
  m.C = j.at("C").get<double>();
  m.trained_on = j.at("trained_on").get<std::string>();
  m.bias = j.at("bias").get<double>();
  m.weights.assign(j.at("dimension").get<std::size_t>(), 0.0);
  for (const json& pair : j.at("weights")) {
    auto index = pair.at(0).get<std::size_t>();
    if (index >= m.weights.size()) throw ModelFormatError("weight index out of range");
    m.weights[index] = pair.at(1).get<double>();
  }
  m.converged = true;
  return m;
}

ForestModel forest_from_json(const json& j) {
  ForestModel m;
  m.params = params_from_json(j.at("params"));
  m.seed = j.at("seed").get<std::uint64_t>();
  m.dimension = j.at("dimension").get<std::size_t>();
  m.trained_on = j.at("trained_on").get<std::string>();
  for (const json& t : j.at("trees")) {
    const json& feature = t.at("feature");
    const json& threshold = t.at("threshold");
    const json& left = t.at("left");
    const json& right = t.at("right");
    const json& value = t.at("value");
    std::size_t count = feature.size();
    if (threshold.size() != count || left.size() != count || right.size() != count || value.size() != count ||
        count == 0) {
      throw ModelFormatError("tree arrays have inconsistent lengths");
    }
    DecisionTree tree;
    tree.nodes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      TreeNode& node = tree.nodes[i];
      node.feature = feature[i].get<std::int32_t>();
      node.threshold = threshold[i].get<double>();
      node.left = left[i].get<std::int32_t>();
      node.right = right[i].get<std::int32_t>();
      node.value = value[i].get<double>();
      if (!(node.value >= 0.0 && node.value <= 1.0)) throw ModelFormatError("leaf value outside [0, 1]");
      if (!node.is_leaf()) {
        auto in_range = [&](std::int32_t child) {
          return child > static_cast<std::int32_t>(i) && static_cast<std::size_t>(child) < count;
        };
        if (static_cast<std::size_t>(node.feature) >= m.dimension || !in_range(node.left) || !in_range(node.right)) {
          throw ModelFormatError("tree node references an invalid feature or child");
        }
      }
    }
    m.trees.push_back(std::move(tree));
  }
  if (m.trees.empty()) throw ModelFormatError("forest has no trees");
  return m;
}

}  // namespace

std::string model_to_json(const TrainedClassifier& classifier) {
  const FeaturePipeline& p = classifier.pipeline();
  const Vocabulary& vocab = p.vocabulary();
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["family"] = classifier.family();
  doc["pipeline"] = {
      {"cleaning_hash", classifier.cleaning_hash()},
      {"vocabulary_hash", classifier.vocabulary_hash()},
      {"feature_kind", to_string(p.kind)},
      {"cleaning", cleaning_to_json(p.cleaning)},
      {"vocabulary",
       {{"ngram_range", {vocab.ngram_range().min, vocab.ngram_range().max}},
        {"max_features", vocab.max_features()},
        {"terms", vocab.terms()},
        {"document_frequency", vocab.document_frequencies()}}},
      {"idf", p.features.idf},
      {"n_docs_fitted", p.features.n_docs_fitted},
      {"normalize", p.features.normalize},
  };
  doc["model"] = std::visit([](const auto& m) { return model_to_json_value(m); }, classifier.model());
  return doc.dump(1);
}

TrainedClassifier model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("model file is corrupted or truncated: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) throw ModelFormatError("model file has no format_version");
    if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != kModelFormatVersion) {
      throw ModelFormatError("unsupported model format_version " + doc["format_version"].dump() + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
    }
    const json& pj = doc.at("pipeline");
    FeaturePipeline pipeline;
    pipeline.cleaning = cleaning_from_json(pj.at("cleaning"));
    pipeline.kind = parse_feature_kind(pj.at("feature_kind").get<std::string>());
    const json& vj = pj.at("vocabulary");
    NgramRange range{vj.at("ngram_range").at(0).get<std::size_t>(), vj.at("ngram_range").at(1).get<std::size_t>()};
    pipeline.features.vocabulary =
        Vocabulary(range, vj.at("max_features").get<std::size_t>(), vj.at("terms").get<std::vector<std::string>>(),
                   vj.at("document_frequency").get<std::vector<std::uint64_t>>());
    pipeline.features.idf = pj.at("idf").get<std::vector<double>>();
    pipeline.features.n_docs_fitted = pj.at("n_docs_fitted").get<std::size_t>();
    pipeline.features.normalize = pj.at("normalize").get<bool>();
    if (pipeline.kind == FeatureKind::TFIDF && pipeline.features.idf.size() != pipeline.features.vocabulary.size()) {
      throw ModelFormatError("idf length does not match vocabulary size");
    }

    if (pipeline.cleaning.hash() != pj.at("cleaning_hash").get<std::string>()) {
      throw ModelFormatError("cleaning configuration does not match its recorded hash");
    }
    if (pipeline.features.vocabulary.hash() != pj.at("vocabulary_hash").get<std::string>()) {
      throw ModelFormatError("vocabulary does not match its recorded hash");
    }

    const std::string family = doc.at("family").get<std::string>();
    const json& mj = doc.at("model");
    if (family == "logistic") return TrainedClassifier(std::move(pipeline), logistic_from_json(mj));
    if (family == "forest") return TrainedClassifier(std::move(pipeline), forest_from_json(mj));
    throw ModelFormatError("unknown model family '" + family + "'");
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelFormatError(std::string("invalid model file: ") + e.what());
  }
}

void save_model(const TrainedClassifier& classifier, const std::filesystem::path& path) {
  // Write-then-rename so a failed save never leaves a partial model behind.
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  csv::write_file(tmp, model_to_json(classifier));
  std::filesystem::rename(tmp, path);
}

TrainedClassifier load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace lobbyml
