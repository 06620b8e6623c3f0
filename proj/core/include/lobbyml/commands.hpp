#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lobbyml/config.hpp"
#include "lobbyml/corpus.hpp"

namespace lobbyml {

struct CommandResult {
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> artifacts;
};

// Reads the bills file and merges the optional lobby-count CSV.
Corpus load_corpus(const ExperimentConfig& config);

// Corpus summaries: bill types, subjects, word-count histogram and plot,
// lobbying-intensity histogram, length-filter counts.
CommandResult cmd_ingest(const ExperimentConfig& config);

// Split, tune, threshold and test; writes report.csv and the model file.
CommandResult cmd_train_eval(const ExperimentConfig& config);

// Top features of a saved logistic model, or of a fresh per-subject model
// when config.subject is set.
CommandResult cmd_explain(const ExperimentConfig& config);

// Rotation scoring of the unlabeled pool plus quarter, subject and top-k
// reports.
CommandResult cmd_score_unlabeled(const ExperimentConfig& config);

// manifest_<command>.json: command, config hash, seed, artifact checksums.
std::filesystem::path write_manifest(const ExperimentConfig& config, const std::string& command,
                                     const std::vector<std::filesystem::path>& artifacts);

}  // namespace lobbyml
