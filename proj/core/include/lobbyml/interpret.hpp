#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "lobbyml/classifier.hpp"
#include "lobbyml/corpus.hpp"

namespace lobbyml {

struct RankedFeature {
  std::string ngram;
  double coefficient = 0.0;
};

struct FeatureReport {
  std::vector<RankedFeature> positive;  // descending coefficient
  std::vector<RankedFeature> negative;  // ascending coefficient
  std::size_t k = 0;
  std::string model_id;
  std::string scope = "all";
};

// Ties in |coefficient| are broken lexicographically by n-gram. Zero
// coefficients never appear.
FeatureReport top_features(const LogisticModel& model, const Vocabulary& vocab, std::size_t k,
                           std::string model_id = {}, std::string scope = "all");

struct SubjectReportSpec {
  CleaningConfig cleaning = CleaningConfig::standard();
  FeatureSpec features{FeatureKind::TFIDF, {1, 2}, kDefaultMaxFeatures, true};
  LogisticParams logistic;
  std::size_t min_per_class = 50;
};

// Trains a logistic model on the subject's labeled bills only and reports
// its top features with scope = subject.
FeatureReport subject_report(const Corpus& corpus, const std::string& subject,
                             const LabelingScheme& scheme, const SubjectReportSpec& spec,
                             std::size_t k);

// rank,ngram,coefficient,sign,scope
std::string feature_report_csv(const FeatureReport& report);

// Writes features_<scope>_positive.svg and features_<scope>_negative.svg.
std::vector<std::filesystem::path> write_feature_plots(const FeatureReport& report,
                                                       const std::filesystem::path& dir);

// Filename-safe version of a scope such as "Finance and Financial Sector".
std::string scope_slug(const std::string& scope);

}  // namespace lobbyml
