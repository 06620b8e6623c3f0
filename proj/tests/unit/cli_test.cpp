#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lobbyml/random.hpp"
#include "lobbyml/synthetic.hpp"
#include "test_support.hpp"

namespace lobbyml {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::read_file;
using testing::TempDir;

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = std::string(LOBBYML_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const TempDir& dir, json doc, const std::string& name = "cfg.json") {
  if (!doc.contains("seed")) doc["seed"] = 7;
  fs::path path = dir / name;
  std::ofstream(path) << doc.dump(2);
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string words(Rng& rng, const std::vector<std::string>& vocab, std::size_t n) {
  std::string t;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) t.push_back(' ');
    t += vocab[rng.uniform_index(vocab.size())];
  }
  return t;
}

json bill(const std::string& id, json count, std::string text, const std::string& date = "2005-05-01") {
  return {{"id", id}, {"bill_type", "H.R."}, {"congress", 109}, {"title", "Bill " + id},
          {"subject", "Energy"}, {"introduced_date", date}, {"lobby_count", count}, {"text", std::move(text)}};
}

void write_lines(const fs::path& path, const std::vector<json>& docs) {
  std::ofstream out(path);
  for (const auto& d : docs) out << d.dump() << "\n";
}

TEST(Cli, UsageErrorsExitTwo) {
  TempDir dir;
  EXPECT_EQ(run_cli("", dir / "log"), 2);
  EXPECT_EQ(run_cli("ingest", dir / "log"), 2);
  EXPECT_EQ(run_cli("ingest --config " + (dir / "nope.json").string(), dir / "log"), 2);
  std::ofstream(dir / "empty.jsonl") << "";
  fs::path cfg = write_config(dir, {{"bills", "empty.jsonl"}});
  EXPECT_EQ(run_cli("ingest --config " + cfg.string() + " --bogus 1", dir / "log"), 2);
  EXPECT_EQ(run_cli("ingest --config " + cfg.string(), dir / "log"), 2);
  EXPECT_NE(read_file(dir / "log").find("error:"), std::string::npos);
  EXPECT_EQ(run_cli("ingest --config " + cfg.string() + " --scheme D9", dir / "log"), 2);
  EXPECT_EQ(run_cli("--help", dir / "log"), 0);
}

TEST(Cli, IngestSummarizesAndFilters) {
  TempDir dir;
  std::string huge;
  for (int i = 0; i < 150001; ++i) huge += "w ";
  write_lines(dir / "bills.jsonl", {bill("a", 0, "one two"), bill("b", 3, "three"), bill("c", "unknown", "four"),
                                    bill("d", 1, huge)});
  fs::path cfg = write_config(dir, {{"bills", "bills.jsonl"}});
  ASSERT_EQ(run_cli("ingest --config " + cfg.string(), dir / "log"), 0) << read_file(dir / "log");
  std::string summary = read_file(dir / "out/ingest_summary.csv");
  EXPECT_NE(summary.find("documents_read,4"), std::string::npos);
  EXPECT_NE(summary.find("dropped_length_filter,1"), std::string::npos);
  EXPECT_NE(summary.find("documents_kept,3"), std::string::npos);
  EXPECT_NE(summary.find("unknown_lobby_count,1"), std::string::npos);
  auto types = lines(read_file(dir / "out/summary_bill_types.csv"));
  ASSERT_GE(types.size(), 2u);
  EXPECT_EQ(types[1], "H.R.,3,1,1,1");
  json manifest = json::parse(read_file(dir / "out/manifest_ingest.json"));
  EXPECT_EQ(manifest["command"], "ingest");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["artifacts"].size(), 6u);
}

TEST(Cli, TrainEvalWithoutPositivesFails) {
  TempDir dir;
  std::vector<json> docs;
  for (int i = 0; i < 40; ++i) docs.push_back(bill("b" + std::to_string(i), i % 2, "alpha beta gamma"));
  write_lines(dir / "bills.jsonl", docs);
  fs::path cfg = write_config(dir, {{"bills", "bills.jsonl"}, {"scheme", "D2"}});
  EXPECT_EQ(run_cli("train-eval --config " + cfg.string(), dir / "log"), 2) << read_file(dir / "log");
}

TEST(Cli, TrainEvalThenExplain) {
  TempDir dir;
  SyntheticParams p;
  p.n_docs = 300;
  p.min_tokens = 60;
  p.max_tokens = 100;
  p.background_vocab = 600;
  p.signal_scale = 0.02;
  p.seed = 3;
  write_jsonl(generate_synthetic_corpus(p).documents, dir / "bills.jsonl");
  fs::path cfg = write_config(dir, {{"bills", "bills.jsonl"}, {"ngram_search", {"1,1"}}, {"grid", {{"C", {1.0}}}}});
  ASSERT_EQ(run_cli("train-eval --config " + cfg.string(), dir / "log"), 0) << read_file(dir / "log");
  auto report = lines(read_file(dir / "out/report.csv"));
  ASSERT_EQ(report.size(), 3u);
  EXPECT_EQ(report[0].rfind("# ", 0), 0u);
  EXPECT_EQ(report[1], "scheme,model,feature_kind,params,val_auc,val_acc,test_auc,test_acc,threshold");
  EXPECT_EQ(report[2].rfind("D1,logistic,tfidf,\"C=1;ngram=1,1\",", 0), 0u);
  auto preds = lines(read_file(dir / "out/test_predictions.csv"));
  EXPECT_EQ(preds.front(), "bill_id,probability");
  EXPECT_TRUE(fs::exists(dir / "out/model.json"));

  ASSERT_EQ(run_cli("explain --config " + cfg.string() + " --k 5", dir / "log"), 0) << read_file(dir / "log");
  auto features = lines(read_file(dir / "out/features_all.csv"));
  EXPECT_EQ(features.front(), "rank,ngram,coefficient,sign,scope");
  EXPECT_EQ(features.size(), 11u);
  EXPECT_TRUE(fs::exists(dir / "out/features_all_positive.svg"));

  EXPECT_EQ(run_cli("explain --config " + cfg.string() + " --model-file " + (dir / "missing.json").string(),
                    dir / "log"),
            2);
  std::ofstream(dir / "broken.json") << "{\"format_version\": 1";
  EXPECT_EQ(run_cli("explain --config " + cfg.string() + " --model-file " + (dir / "broken.json").string(),
                    dir / "log"),
            2);
}

class CliRotation : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(5);
    std::vector<std::string> vocab = clean_pseudo_words(200);
    std::vector<json> docs;
    for (int i = 0; i < 6; ++i) docs.push_back(bill("pos" + std::to_string(i), 120, words(rng, vocab, 300)));
    for (int i = 0; i < 10; ++i) {
      docs.push_back(bill("u" + std::to_string(i), "unknown", words(rng, vocab, 2000 + i),
                          "2004-0" + std::to_string(1 + i % 9) + "-15"));
    }
    docs.push_back(bill("short", "unknown", words(rng, vocab, 1999)));
    docs.push_back(bill("old", "unknown", words(rng, vocab, 2500), "1989-12-31"));
    write_lines(dir / "bills.jsonl", docs);
  }
  TempDir dir;
};

TEST_F(CliRotation, ScoresPoolAndReproduces) {
  fs::path cfg = write_config(dir, {{"bills", "bills.jsonl"}, {"k", 3}, {"rotation", {{"ngrams", "1,1"}}}});
  ASSERT_EQ(run_cli("score-unlabeled --config " + cfg.string(), dir / "log"), 0) << read_file(dir / "log");
  auto rows = lines(read_file(dir / "out/unlabeled_scores.csv"));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], "bill_id,score_iter_0,score_iter_1,score_iter_2,score_iter_3,mean_score");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), 5);
    EXPECT_EQ(rows[i].rfind("short", 0), std::string::npos);
    EXPECT_EQ(rows[i].rfind("old", 0), std::string::npos);
  }
  EXPECT_EQ(lines(read_file(dir / "out/top_bills.csv")).size(), 4u);
  std::string pool = read_file(dir / "out/pool_summary.csv");
  EXPECT_NE(pool.find("excluded_short,1"), std::string::npos);
  EXPECT_NE(pool.find("excluded_before_min_year,1"), std::string::npos);

  std::string scores = read_file(dir / "out/unlabeled_scores.csv");
  std::string manifest = read_file(dir / "out/manifest_score-unlabeled.json");
  ASSERT_EQ(run_cli("score-unlabeled --config " + cfg.string() + " --out " + (dir / "again").string(), dir / "log"), 0);
  EXPECT_EQ(read_file(dir / "again/unlabeled_scores.csv"), scores);
  json a = json::parse(manifest), b = json::parse(read_file(dir / "again/manifest_score-unlabeled.json"));
  EXPECT_EQ(a["artifacts"], b["artifacts"]);
}

TEST_F(CliRotation, PoolSmallerThanBatchesFails) {
  fs::path cfg = write_config(dir, {{"bills", "bills.jsonl"}, {"rotation", {{"num_batches", 11}}}});
  EXPECT_EQ(run_cli("score-unlabeled --config " + cfg.string(), dir / "log"), 2);
  EXPECT_NE(read_file(dir / "log").find("unlabeled pool"), std::string::npos);
}

}  // namespace
}  // namespace lobbyml
