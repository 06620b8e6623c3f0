// lobbyml: command-line front end for ingest, train-eval, explain and
// score-unlabeled.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lobbyml/commands.hpp"
#include "lobbyml/config.hpp"
#include "lobbyml/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  lobbyml::ConfigOverrides overrides;
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")->required();
  cmd->add_option("--scheme", opts.overrides.scheme, "Labeling scheme: D1, D2, D3 or min=<n>");
  cmd->add_option("--model", opts.overrides.model, "Model family: logistic or forest");
  cmd->add_option("--features", opts.overrides.features, "Feature kind: bow or tfidf");
  cmd->add_option("--seed", opts.overrides.seed, "Random seed");
  cmd->add_option("--k", opts.overrides.k, "Number of top features or bills to report");
  cmd->add_option("--subject", opts.overrides.subject, "Restrict explain to one subject area");
  cmd->add_option("--out", opts.overrides.out, "Output directory");
  cmd->add_option("--model-file", opts.overrides.model_file, "Model file to write or read");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lobbying classification for legislative bill texts"};
  app.require_subcommand(1);
  Options opts;
  auto* ingest = app.add_subcommand("ingest", "Summarize a bill corpus");
  auto* train = app.add_subcommand("train-eval", "Tune, threshold and test a classifier");
  auto* explain = app.add_subcommand("explain", "Report the most important n-grams");
  auto* score = app.add_subcommand("score-unlabeled", "Rotation scoring of bills without lobbying records");
  for (auto* cmd : {ingest, train, explain, score}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    lobbyml::ExperimentConfig config = lobbyml::ExperimentConfig::load(opts.config_path);
    opts.overrides.apply(config);
    lobbyml::CommandResult result;
    if (ingest->parsed()) {
      result = lobbyml::cmd_ingest(config);
    } else if (train->parsed()) {
      result = lobbyml::cmd_train_eval(config);
    } else if (explain->parsed()) {
      result = lobbyml::cmd_explain(config);
    } else {
      result = lobbyml::cmd_score_unlabeled(config);
    }
    for (const auto& path : result.artifacts) std::cout << path.string() << "\n";
    std::cout << result.manifest.string() << "\n";
    return kExitOk;
  } catch (const lobbyml::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
