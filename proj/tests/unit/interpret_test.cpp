#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "lobbyml/error.hpp"
#include "lobbyml/interpret.hpp"
#include "lobbyml/random.hpp"
#include "lobbyml/synthetic.hpp"
#include "test_support.hpp"

namespace lobbyml {
namespace {

using testing::TempDir;

std::vector<std::string> names(const std::vector<RankedFeature>& list) {
  std::vector<std::string> out;
  for (const auto& f : list) out.push_back(f.ngram);
  return out;
}

LogisticModel with_weights(std::vector<double> w) {
  LogisticModel m;
  m.weights = std::move(w);
  return m;
}

TEST(TopFeatures, SortingExample) {
  Vocabulary v({1, 1}, 10, {"a", "b", "c"}, {1, 1, 1});
  FeatureReport r = top_features(with_weights({2.0, -1.0, 0.5}), v, 2);
  EXPECT_EQ(names(r.positive), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(names(r.negative), (std::vector<std::string>{"b"}));
  EXPECT_EQ(r.scope, "all");
  EXPECT_EQ(r.k, 2u);
}

TEST(TopFeatures, ZeroWeightsAndTruncation) {
  Vocabulary v({1, 1}, 10, {"a", "b", "c"}, {1, 1, 1});
  FeatureReport zero = top_features(with_weights({0.0, 0.0, 0.0}), v, 5);
  EXPECT_TRUE(zero.positive.empty());
  EXPECT_TRUE(zero.negative.empty());
  FeatureReport all = top_features(with_weights({1.0, 0.0, -3.0}), v, 50);
  EXPECT_EQ(all.positive.size(), 1u);
  EXPECT_EQ(all.negative.size(), 1u);
}

TEST(TopFeatures, TiesAreLexicographic) {
  Vocabulary v({1, 1}, 10, {"a", "b", "c", "d"}, {1, 1, 1, 1});
  FeatureReport r = top_features(with_weights({1.0, -1.0, 1.0, -1.0}), v, 4);
  EXPECT_EQ(names(r.positive), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(names(r.negative), (std::vector<std::string>{"b", "d"}));
}

TEST(TopFeatures, Errors) {
  Vocabulary v({1, 1}, 10, {"a"}, {1});
  EXPECT_THROW(top_features(with_weights({1.0}), v, 0), ContractError);
  EXPECT_THROW(top_features(with_weights({1.0, 2.0}), v, 1), ContractError);
}

TEST(TopFeatures, OrderingProperties) {
  Rng rng(6);
  std::vector<std::string> terms;
  for (int i = 0; i < 60; ++i) terms.push_back("t" + std::to_string(100 + i));
  Vocabulary v({1, 1}, 100, terms, std::vector<std::uint64_t>(60, 1));
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> w(60);
    for (double& x : w) x = rng.bernoulli(0.2) ? 0.0 : std::round((rng.uniform01() * 2 - 1) * 8) / 4;
    FeatureReport r = top_features(with_weights(w), v, 10);
    for (std::size_t i = 1; i < r.positive.size(); ++i) EXPECT_GE(r.positive[i - 1].coefficient, r.positive[i].coefficient);
    for (std::size_t i = 1; i < r.negative.size(); ++i) EXPECT_LE(r.negative[i - 1].coefficient, r.negative[i].coefficient);
    std::vector<std::string> pos_names = names(r.positive);
    std::set<std::string> pos(pos_names.begin(), pos_names.end());
    for (const auto& f : r.negative) EXPECT_FALSE(pos.count(f.ngram));
    for (const auto& f : r.positive) EXPECT_GT(f.coefficient, 0.0);
    for (const auto& f : r.negative) EXPECT_LT(f.coefficient, 0.0);

    double lambda = 0.5 + rng.uniform01() * 4;
    std::vector<double> scaled = w;
    for (double& x : scaled) x *= lambda;
    FeatureReport s = top_features(with_weights(scaled), v, 10);
    EXPECT_EQ(names(s.positive), names(r.positive));
    EXPECT_EQ(names(s.negative), names(r.negative));
  }
}

TEST(FeatureReport, CsvAndPlots) {
  Vocabulary v({1, 2}, 10, {"a", "a b", "c"}, {1, 1, 1});
  FeatureReport r = top_features(with_weights({2.0, -1.0, 0.0}), v, 3, "m", "Energy");
  EXPECT_EQ(feature_report_csv(r),
            "rank,ngram,coefficient,sign,scope\n1,a,2,positive,Energy\n1,a b,-1,negative,Energy\n");
  TempDir dir;
  auto files = write_feature_plots(r, dir.path());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "features_energy_positive.svg");
  EXPECT_EQ(files[1].filename(), "features_energy_negative.svg");
  EXPECT_NE(testing::read_file(files[0]).find("<svg"), std::string::npos);
  EXPECT_EQ(scope_slug("Finance and Financial Sector"), "finance_and_financial_sector");
  EXPECT_EQ(scope_slug("!!"), "scope");
}

// Two subjects over disjoint vocabularies, each with its own planted marker.
Corpus two_subject_corpus() {
  std::vector<std::string> words = clean_pseudo_words(400);
  Corpus corpus;
  Rng rng(12);
  int id = 0;
  for (int s = 0; s < 2; ++s) {
    const std::string subject = s == 0 ? "Energy" : "Health";
    const std::string marker = s == 0 ? "smart" : "vaccine";
    for (int i = 0; i < 140; ++i) {
      bool positive = i % 2 == 0;
      std::string text;
      for (int t = 0; t < 60; ++t) {
        if (t) text.push_back(' ');
        text += words[static_cast<std::size_t>(s) * 200 + rng.uniform_index(200)];
      }
      if (positive) text += " " + marker + " " + marker;
      BillDocument doc = testing::make_bill("b" + std::to_string(id++), positive ? 60 : 0, text);
      doc.subject = subject;
      corpus.push_back(std::move(doc));
    }
  }
  corpus.push_back(testing::make_bill("lonely", 100, "x"));
  corpus.back().subject = "Tiny";
  return corpus;
}

TEST(SubjectReport, PlantedMarkerRanksFirst) {
  Corpus corpus = two_subject_corpus();
  SubjectReportSpec spec;
  spec.logistic.C = 10.0;
  FeatureReport energy = subject_report(corpus, "Energy", LabelingScheme::d3(), spec, 10);
  FeatureReport health = subject_report(corpus, "Health", LabelingScheme::d3(), spec, 10);
  EXPECT_EQ(energy.scope, "Energy");
  ASSERT_FALSE(energy.positive.empty());
  EXPECT_EQ(energy.positive.front().ngram, "smart");
  EXPECT_EQ(health.positive.front().ngram, "vaccine");

  std::set<std::string> energy_terms;
  for (const auto* l : {&energy.positive, &energy.negative}) {
    for (const auto& f : *l) energy_terms.insert(f.ngram);
  }
  for (const auto* l : {&health.positive, &health.negative}) {
    for (const auto& f : *l) EXPECT_FALSE(energy_terms.count(f.ngram)) << f.ngram;
  }
}

TEST(SubjectReport, Errors) {
  Corpus corpus = two_subject_corpus();
  SubjectReportSpec spec;
  EXPECT_THROW(subject_report(corpus, "Agriculture", LabelingScheme::d3(), spec, 5), ContractError);
  try {
    subject_report(corpus, "Tiny", LabelingScheme::d3(), spec, 5);
    FAIL();
  } catch (const ContractError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("Tiny"), std::string::npos);
    EXPECT_NE(msg.find("1 positive"), std::string::npos);
  }
  spec.min_per_class = 71;
  EXPECT_THROW(subject_report(corpus, "Energy", LabelingScheme::d3(), spec, 5), ContractError);
}

}  // namespace
}  // namespace lobbyml
