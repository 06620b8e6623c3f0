#include "lobbyml/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/plot.hpp"

namespace lobbyml {

FeatureReport top_features(const LogisticModel& model, const Vocabulary& vocab, std::size_t k, std::string model_id,
                           std::string scope) {
  if (k == 0) throw ContractError("k must be >= 1");
  if (model.weights.size() != vocab.size()) {
    throw ContractError("model dimension " + std::to_string(model.weights.size()) + " does not match vocabulary size " +
                        std::to_string(vocab.size()));
  }
  FeatureReport report;
  report.k = k;
  report.model_id = std::move(model_id);
  report.scope = std::move(scope);
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    double w = model.weights[i];
    if (w > 0.0) report.positive.push_back({vocab.terms()[i], w});
    if (w < 0.0) report.negative.push_back({vocab.terms()[i], w});
  }
  auto rank = [k](std::vector<RankedFeature>& list) {
    std::sort(list.begin(), list.end(), [](const RankedFeature& a, const RankedFeature& b) {
      double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
      return ma != mb ? ma > mb : a.ngram < b.ngram;
    });
    if (list.size() > k) list.resize(k);
  };
  rank(report.positive);
  rank(report.negative);
  return report;
}

FeatureReport subject_report(const Corpus& corpus, const std::string& subject, const LabelingScheme& scheme,
                             const SubjectReportSpec& spec, std::size_t k) {
  if (k == 0) throw ContractError("k must be >= 1");
  Corpus bills;
  for (const BillDocument& doc : corpus) {
    if (doc.subject && *doc.subject == subject && doc.lobby_count) bills.push_back(doc);
  }
  if (bills.empty()) throw ContractError("subject '" + subject + "' has no labeled bills in the corpus");
  LabeledDataset labeled = build_labeled_dataset(bills, scheme);
  std::size_t pos = labeled.positives(), neg = labeled.negatives();
  if (pos < spec.min_per_class || neg < spec.min_per_class) {
    throw ContractError("subject '" + subject + "' has " + std::to_string(pos) + " positive and " +
                        std::to_string(neg) + " negative bills under " + scheme.name() + "; need at least " +
                        std::to_string(spec.min_per_class) + " of each");
  }
  auto index = index_by_id(bills);
  std::vector<TokenSequence> tokens;
  std::vector<int> labels;
  for (const LabeledExample& e : labeled.examples) {
    tokens.push_back(clean(bills[index.at(e.bill_id)].raw_text, spec.cleaning));
    labels.push_back(e.label);
  }
  std::string model_id = "subject=" + subject + ";scheme=" + scheme.name();
  TrainedClassifier classifier = fit_classifier(spec.cleaning, spec.features, spec.logistic, tokens, labels, model_id);
  return top_features(std::get<LogisticModel>(classifier.model()), classifier.pipeline().vocabulary(), k, model_id,
                      subject);
}

std::string feature_report_csv(const FeatureReport& report) {
  std::ostringstream out;
  csv::write_row(out, {"rank", "ngram", "coefficient", "sign", "scope"});
  auto emit = [&](const std::vector<RankedFeature>& list, const char* sign) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      csv::write_row(out, {std::to_string(i + 1), list[i].ngram, csv::format_double(list[i].coefficient), sign,
                           report.scope});
    }
  };
  emit(report.positive, "positive");
  emit(report.negative, "negative");
  return out.str();
}

std::string scope_slug(const std::string& scope) {
  std::string slug;
  for (char c : scope) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      slug.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      slug.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (!slug.empty() && slug.back() != '_') {
      slug.push_back('_');
    }
  }
  while (!slug.empty() && slug.back() == '_') slug.pop_back();
  return slug.empty() ? "scope" : slug;
}

std::vector<std::filesystem::path> write_feature_plots(const FeatureReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto plot_one = [&](const std::vector<RankedFeature>& list, const std::string& sign) {
    std::vector<std::pair<std::string, double>> bars;
    for (const RankedFeature& f : list) bars.emplace_back(f.ngram, f.coefficient);
    auto path = dir / ("features_" + scope_slug(report.scope) + "_" + sign + ".svg");
    csv::write_file(path, plot::bar_chart_svg("Most important " + sign + " features (" + report.scope + ")", bars));
    written.push_back(path);
  };
  plot_one(report.positive, "positive");
  plot_one(report.negative, "negative");
  return written;
}

}  // namespace lobbyml
