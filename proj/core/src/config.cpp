#include "lobbyml/config.hpp"

#include <fstream>
#include <set>

#include "lobbyml/error.hpp"
#include "lobbyml/hashing.hpp"

namespace lobbyml {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base_dir, const std::string& text) {
  fs::path p(text);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ContractError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw ContractError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ContractError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_size(const json& value, const std::string& key) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ContractError("config key '" + key + "' must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

NgramRange ngram_from_json(const json& value) {
  if (value.is_string()) return NgramRange::parse(value.get<std::string>());
  if (value.is_array() && value.size() == 2 && value[0].is_number_integer() && value[1].is_number_integer()) {
    return NgramRange::parse(std::to_string(value[0].get<long long>()) + "," +
                             std::to_string(value[1].get<long long>()));
  }
  throw ContractError("n-gram range must be \"min,max\" or [min, max]");
}

std::vector<double> thresholds_from_json(const json& value, const std::string& key) {
  if (!value.is_array()) throw ContractError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& v : value) {
    if (!v.is_number()) throw ContractError("config key '" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void check_thresholds(const std::vector<double>& thresholds, const std::string& key) {
  if (thresholds.empty()) throw ContractError("'" + key + "' must not be empty");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) throw ContractError("'" + key + "' values must lie in [0, 1]");
  }
}

void require_file(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ContractError(what + " '" + path.string() + "' does not exist");
}

RotationSettings rotation_from_json(const json& doc) {
  check_keys(doc,
             {"num_batches", "positive_scheme", "min_year", "min_words", "ngrams", "C", "trend_thresholds",
              "subject_thresholds"},
             "rotation");
  RotationSettings r;
  if (doc.contains("num_batches")) r.num_batches = get_size(doc["num_batches"], "rotation.num_batches");
  if (doc.contains("positive_scheme")) {
    r.positive_scheme = LabelingScheme::parse(get_as<std::string>(doc["positive_scheme"], "rotation.positive_scheme"));
  }
  if (doc.contains("min_year")) r.filters.min_year = get_as<int>(doc["min_year"], "rotation.min_year");
  if (doc.contains("min_words")) r.filters.min_words = get_size(doc["min_words"], "rotation.min_words");
  if (doc.contains("ngrams")) r.ngrams = ngram_from_json(doc["ngrams"]);
  if (doc.contains("C")) r.C = get_as<double>(doc["C"], "rotation.C");
  if (doc.contains("trend_thresholds")) {
    r.trend_thresholds = thresholds_from_json(doc["trend_thresholds"], "rotation.trend_thresholds");
  }
  if (doc.contains("subject_thresholds")) {
    r.subject_thresholds = thresholds_from_json(doc["subject_thresholds"], "rotation.subject_thresholds");
  }
  return r;
}

}  // namespace

ParamGrid grid_from_json(const json& doc) {
  if (!doc.is_object()) throw ContractError("grid must be an object of parameter arrays");
  ParamGrid grid;
  for (const auto& item : doc.items()) {
    if (!item.value().is_array() || item.value().empty()) {
      throw ContractError("grid parameter '" + item.key() + "' must be a non-empty array");
    }
    auto& values = grid[item.key()];
    for (const json& v : item.value()) {
      if (v.is_number_integer()) {
        values.emplace_back(v.get<std::int64_t>());
      } else if (v.is_number()) {
        values.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        values.emplace_back(v.get<std::string>());
      } else {
        throw ContractError("grid parameter '" + item.key() + "' has an unsupported value");
      }
    }
  }
  return grid;
}

json grid_to_json(const ParamGrid& grid) {
  json doc = json::object();
  for (const auto& [name, values] : grid) {
    json arr = json::array();
    for (const ParamValue& v : values) std::visit([&arr](const auto& x) { arr.push_back(x); }, v);
    doc[name] = std::move(arr);
  }
  return doc;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc, const fs::path& base_dir) {
  check_keys(doc,
             {"bills", "lobby_counts", "stopwords", "lemma_exceptions", "output_dir", "model_file", "scheme",
              "features", "ngram_search", "max_features", "model", "grid", "seed", "max_words", "max_tokens", "k",
              "subject", "rotation"},
             "config");
  ExperimentConfig c;
  if (!doc.contains("bills")) throw ContractError("config is missing 'bills'");
  c.bills = resolve(base_dir, get_as<std::string>(doc["bills"], "bills"));
  if (doc.contains("lobby_counts") && !doc["lobby_counts"].is_null()) {
    c.lobby_counts = resolve(base_dir, get_as<std::string>(doc["lobby_counts"], "lobby_counts"));
  }
  if (doc.contains("stopwords")) {
    if (!doc["stopwords"].is_array()) throw ContractError("'stopwords' must be an array");
    for (const json& entry : doc["stopwords"]) {
      check_keys(entry, {"name", "path"}, "stopwords entry");
      if (!entry.contains("path")) throw ContractError("stopwords entry is missing 'path'");
      fs::path path = resolve(base_dir, get_as<std::string>(entry["path"], "stopwords.path"));
      std::string name = entry.contains("name") ? get_as<std::string>(entry["name"], "stopwords.name")
                                                : path.stem().string();
      c.stopwords.push_back({name, path});
    }
  }
  if (doc.contains("lemma_exceptions") && !doc["lemma_exceptions"].is_null()) {
    c.lemma_exceptions = resolve(base_dir, get_as<std::string>(doc["lemma_exceptions"], "lemma_exceptions"));
  }
  if (doc.contains("output_dir")) c.output_dir = resolve(base_dir, get_as<std::string>(doc["output_dir"], "output_dir"));
  else c.output_dir = resolve(base_dir, "out");
  if (doc.contains("model_file") && !doc["model_file"].is_null()) {
    c.model_file = resolve(base_dir, get_as<std::string>(doc["model_file"], "model_file"));
  }
  if (doc.contains("scheme")) c.scheme = LabelingScheme::parse(get_as<std::string>(doc["scheme"], "scheme"));
  if (doc.contains("features")) c.features = parse_feature_kind(get_as<std::string>(doc["features"], "features"));
  if (doc.contains("ngram_search")) {
    const json& arr = doc["ngram_search"];
    if (!arr.is_array() || arr.empty()) throw ContractError("'ngram_search' must be a non-empty array");
    c.ngram_search.clear();
    for (const json& v : arr) c.ngram_search.push_back(ngram_from_json(v));
  }
  if (doc.contains("max_features")) c.max_features = get_size(doc["max_features"], "max_features");
  if (doc.contains("model")) c.model = parse_model_family(get_as<std::string>(doc["model"], "model"));
  if (doc.contains("grid") && !doc["grid"].is_null()) c.grid = grid_from_json(doc["grid"]);
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      throw ContractError("'seed' must be a non-negative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("max_words")) c.max_words = get_size(doc["max_words"], "max_words");
  if (doc.contains("max_tokens") && !doc["max_tokens"].is_null()) c.max_tokens = get_size(doc["max_tokens"], "max_tokens");
  if (doc.contains("k")) c.k = get_size(doc["k"], "k");
  if (doc.contains("subject") && !doc["subject"].is_null()) c.subject = get_as<std::string>(doc["subject"], "subject");
  if (doc.contains("rotation")) c.rotation = rotation_from_json(doc["rotation"]);
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ContractError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(doc, path.parent_path());
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["bills"] = bills.string();
  doc["lobby_counts"] = lobby_counts ? json(lobby_counts->string()) : json(nullptr);
  json lists = json::array();
  for (const StopwordFile& s : stopwords) lists.push_back({{"name", s.name}, {"path", s.path.string()}});
  doc["stopwords"] = lists;
  doc["lemma_exceptions"] = lemma_exceptions ? json(lemma_exceptions->string()) : json(nullptr);
  doc["output_dir"] = output_dir.string();
  doc["model_file"] = model_file ? json(model_file->string()) : json(nullptr);
  doc["scheme"] = scheme.name();
  doc["features"] = std::string(to_string(features));
  json ngrams = json::array();
  for (const NgramRange& r : ngram_search) ngrams.push_back(r.str());
  doc["ngram_search"] = ngrams;
  doc["max_features"] = max_features;
  doc["model"] = std::string(to_string(model));
  doc["grid"] = grid ? grid_to_json(*grid) : json(nullptr);
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  doc["max_words"] = max_words;
  doc["max_tokens"] = max_tokens ? json(*max_tokens) : json(nullptr);
  doc["k"] = k;
  doc["subject"] = subject ? json(*subject) : json(nullptr);
  json thresholds_trend(rotation.trend_thresholds), thresholds_subject(rotation.subject_thresholds);
  doc["rotation"] = {{"num_batches", rotation.num_batches},
                     {"positive_scheme", rotation.positive_scheme.name()},
                     {"min_year", rotation.filters.min_year},
                     {"min_words", rotation.filters.min_words},
                     {"ngrams", rotation.ngrams.str()},
                     {"C", rotation.C},
                     {"trend_thresholds", thresholds_trend},
                     {"subject_thresholds", thresholds_subject}};
  return doc;
}

void ExperimentConfig::validate() const {
  if (!seed) throw ContractError("config must set 'seed'");
  require_file(bills, "bills file");
  if (lobby_counts) require_file(*lobby_counts, "lobby counts file");
  for (const StopwordFile& s : stopwords) require_file(s.path, "stopword file");
  if (lemma_exceptions) require_file(*lemma_exceptions, "lemma exception file");
  if (max_features == 0) throw ContractError("'max_features' must be >= 1");
  if (max_words == 0) throw ContractError("'max_words' must be >= 1");
  if (max_tokens && *max_tokens == 0) throw ContractError("'max_tokens' must be >= 1");
  if (k == 0) throw ContractError("'k' must be >= 1");
  if (ngram_search.empty()) throw ContractError("'ngram_search' must not be empty");
  if (rotation.num_batches < 2) throw ContractError("'rotation.num_batches' must be >= 2");
  if (!(rotation.C > 0.0)) throw ContractError("'rotation.C' must be positive");
  check_thresholds(rotation.trend_thresholds, "rotation.trend_thresholds");
  check_thresholds(rotation.subject_thresholds, "rotation.subject_thresholds");
}

std::string ExperimentConfig::hash() const { return sha256_hex(to_json().dump()); }

fs::path ExperimentConfig::effective_model_file() const {
  return model_file ? *model_file : output_dir / "model.json";
}

CleaningConfig ExperimentConfig::cleaning() const {
  CleaningConfig c = CleaningConfig::standard();
  if (!stopwords.empty()) {
    c.stopword_lists.clear();
    for (const StopwordFile& s : stopwords) c.stopword_lists.push_back(load_stopwords(s.path, s.name));
  }
  if (lemma_exceptions) c.lemmatizer = Lemmatizer::load(*lemma_exceptions);
  c.max_tokens = max_tokens;
  c.validate();
  return c;
}

ExperimentSpec ExperimentConfig::experiment_spec() const {
  ExperimentSpec spec;
  spec.scheme = scheme;
  spec.cleaning = cleaning();
  spec.feature_kind = features;
  spec.ngram_search = ngram_search;
  spec.max_features = max_features;
  spec.family = model;
  spec.grid = grid ? *grid : default_grid(model);
  spec.seed = seed.value_or(0);
  return spec;
}

void ConfigOverrides::apply(ExperimentConfig& config) const {
  if (scheme) config.scheme = LabelingScheme::parse(*scheme);
  if (model) {
    ModelFamily family = parse_model_family(*model);
    // A grid written for the other family would only produce unknown keys.
    if (family != config.model) config.grid.reset();
    config.model = family;
  }
  if (features) config.features = parse_feature_kind(*features);
  if (seed) config.seed = *seed;
  if (k) config.k = *k;
  if (subject) config.subject = *subject;
  if (out) config.output_dir = out->lexically_normal();
  if (model_file) config.model_file = model_file->lexically_normal();
}

}  // namespace lobbyml
