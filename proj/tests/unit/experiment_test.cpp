#include <algorithm>

#include <gtest/gtest.h>

#include "lobbyml/error.hpp"
#include "lobbyml/experiment.hpp"
#include "lobbyml/synthetic.hpp"
#include "test_support.hpp"

namespace lobbyml {
namespace {

Corpus planted_corpus(std::uint64_t seed, std::size_t n = 600) {
  SyntheticParams sp;
  sp.n_docs = n;
  sp.min_tokens = 150;
  sp.max_tokens = 300;
  sp.background_vocab = 2000;
  sp.signal_scale = 0.004;
  sp.seed = seed;
  return generate_synthetic_corpus(sp).documents;
}

ExperimentSpec logistic_spec(ParamGrid grid) {
  ExperimentSpec spec;
  spec.scheme = LabelingScheme::d2();
  spec.ngram_search = {{1, 1}};
  spec.max_features = 5000;
  spec.grid = std::move(grid);
  spec.seed = 9;
  return spec;
}

TEST(DefaultGrid, Families) {
  ParamGrid lg = default_grid(ModelFamily::Logistic);
  EXPECT_EQ(lg.at("C").size(), 5u);
  EXPECT_EQ(lg.at("penalty").size(), 2u);
  ParamGrid fg = default_grid(ModelFamily::Forest);
  for (const char* key : {"criterion", "max_depth", "min_samples_leaf", "min_samples_split"}) EXPECT_TRUE(fg.count(key));
}

TEST(ModelSpecFromParams, MapsAndRejects) {
  auto lg = std::get<LogisticParams>(model_spec_from_params(
      ModelFamily::Logistic, {{"C", 10.0}, {"penalty", std::string("l1")}, {"ngram", std::string("1,2")}}, 0));
  EXPECT_EQ(lg.C, 10.0);
  EXPECT_EQ(lg.penalty, Penalty::L1);
  auto fs = std::get<ForestSpec>(model_spec_from_params(
      ModelFamily::Forest, {{"max_depth", std::int64_t{0}}, {"min_samples_leaf", std::int64_t{5}}}, 4));
  EXPECT_FALSE(fs.params.max_depth.has_value());
  EXPECT_EQ(fs.params.min_samples_leaf, 5u);
  EXPECT_EQ(fs.seed, 4u);
  EXPECT_THROW(model_spec_from_params(ModelFamily::Logistic, {{"gamma", 1.0}}, 0), ContractError);
  EXPECT_THROW(model_spec_from_params(ModelFamily::Logistic, {{"C", -1.0}}, 0), ContractError);
  EXPECT_THROW(parse_model_family("svm"), ContractError);
}

TEST(RunExperiment, WeakRegularizationWinsOnPlantedSignal) {
  Corpus corpus = planted_corpus(4);
  ExperimentResult r = run_experiment(corpus, logistic_spec({{"C", {0.01, 100.0}}}));
  ASSERT_EQ(r.search.trials.size(), 2u);
  EXPECT_EQ(to_string(r.search.best_params), "C=100;ngram=1,1");
  EXPECT_GT(*r.search.trials[1].val_auc, *r.search.trials[0].val_auc);
  EXPECT_EQ(r.val_auc, r.search.best_val_auc);
  EXPECT_EQ(r.test_predictions.size(), r.n_test);
  EXPECT_EQ(r.n_train + r.n_validation + r.n_test + r.n_excluded,
            static_cast<std::size_t>(std::count_if(corpus.begin(), corpus.end(),
                                                   [](const BillDocument& d) { return d.lobby_count.has_value(); })));
}

TEST(RunExperiment, DeterministicReportForFixedSeed) {
  Corpus corpus = planted_corpus(5, 400);
  ExperimentSpec spec = logistic_spec({{"C", {1.0}}});
  std::string a = report_row_csv(spec, run_experiment(corpus, spec));
  std::string b = report_row_csv(spec, run_experiment(corpus, spec));
  EXPECT_EQ(a, b);
  EXPECT_EQ(report_header_csv().substr(0, 1), "#");
}

TEST(RunExperiment, NoPositivesUnderScheme) {
  Corpus corpus;
  for (int i = 0; i < 40; ++i) corpus.push_back(testing::make_bill("b" + std::to_string(i), i % 2, "alpha beta gamma"));
  ExperimentSpec spec = logistic_spec({{"C", {1.0}}});
  try {
    run_experiment(corpus, spec);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("no positives"), std::string::npos);
  }
}

TEST(RunExperiment, ForestFamily) {
  Corpus corpus = planted_corpus(6, 300);
  ExperimentSpec spec = logistic_spec({{"n_trees", {std::int64_t{10}}}, {"criterion", {std::string("gini")}}});
  spec.family = ModelFamily::Forest;
  ExperimentResult r = run_experiment(corpus, spec);
  EXPECT_EQ(r.classifier->family(), "forest");
  EXPECT_GT(r.test_auc, 0.5);
}

}  // namespace
}  // namespace lobbyml
