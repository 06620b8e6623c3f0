#include "lobbyml/commands.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/hashing.hpp"
#include "lobbyml/interpret.hpp"
#include "lobbyml/plot.hpp"

namespace lobbyml {
namespace {

namespace fs = std::filesystem;

const std::vector<std::uint64_t> kWordCountEdges = {0, 1000, 2000, 5000, 10000, 20000, 50000, 100000, 150000};

fs::path emit(std::vector<fs::path>& artifacts, const fs::path& path, std::string_view contents) {
  csv::write_file(path, contents);
  artifacts.push_back(path);
  return path;
}

std::vector<std::pair<std::string, double>> histogram_bars(const Histogram& h) {
  std::vector<std::pair<std::string, double>> bars;
  for (std::size_t i = 0; i < h.labels.size(); ++i) bars.emplace_back(h.labels[i], static_cast<double>(h.counts[i]));
  return bars;
}

struct ClassCounts {
  std::size_t total = 0, lobbied = 0, not_lobbied = 0, unknown = 0;

  void add(const BillDocument& doc) {
    ++total;
    if (!doc.lobby_count) ++unknown;
    else if (*doc.lobby_count > 0) ++lobbied;
    else ++not_lobbied;
  }
  std::vector<std::string> fields() const {
    return {std::to_string(total), std::to_string(lobbied), std::to_string(not_lobbied), std::to_string(unknown)};
  }
};

std::string bill_type_csv(const Corpus& corpus) {
  std::map<int, ClassCounts> by_type;  // -1 for missing
  for (const BillDocument& doc : corpus) by_type[doc.bill_type ? static_cast<int>(*doc.bill_type) : -1].add(doc);
  std::ostringstream out;
  csv::write_row(out, {"bill_type", "n_bills", "lobbied", "not_lobbied", "unknown"});
  for (const auto& [type, counts] : by_type) {
    std::vector<std::string> row{type < 0 ? "(none)" : std::string(to_string(static_cast<BillType>(type)))};
    for (auto& f : counts.fields()) row.push_back(f);
    csv::write_row(out, row);
  }
  return out.str();
}

std::string subject_csv(const Corpus& corpus) {
  std::map<std::string, ClassCounts> by_subject;
  for (const BillDocument& doc : corpus) by_subject[doc.subject.value_or(kNoSubject)].add(doc);
  std::vector<std::pair<std::string, ClassCounts>> rows(by_subject.begin(), by_subject.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second.total > b.second.total; });
  std::ostringstream out;
  csv::write_row(out, {"subject", "n_bills", "lobbied", "not_lobbied", "unknown"});
  for (const auto& [subject, counts] : rows) {
    std::vector<std::string> row{subject};
    for (auto& f : counts.fields()) row.push_back(f);
    csv::write_row(out, row);
  }
  return out.str();
}

std::string metrics_csv(const std::vector<std::pair<std::string, std::string>>& metrics) {
  std::ostringstream out;
  csv::write_row(out, {"metric", "value"});
  for (const auto& [name, value] : metrics) csv::write_row(out, {name, value});
  return out.str();
}

void prepare(const ExperimentConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw ContractError("cannot create output directory '" + config.output_dir.string() + "'");
}

CommandResult finish(const ExperimentConfig& config, const std::string& command, std::vector<fs::path> artifacts) {
  CommandResult result;
  result.manifest = write_manifest(config, command, artifacts);
  result.artifacts = std::move(artifacts);
  return result;
}

}  // namespace

Corpus load_corpus(const ExperimentConfig& config) {
  Corpus corpus = ingest_corpus(config.bills);
  if (corpus.empty()) throw ContractError("bills file '" + config.bills.string() + "' contains no documents");
  if (config.lobby_counts) merge_lobby_counts(corpus, read_lobby_counts(*config.lobby_counts));
  return corpus;
}

CommandResult cmd_ingest(const ExperimentConfig& config) {
  prepare(config);
  Corpus corpus = ingest_corpus(config.bills);
  if (corpus.empty()) throw ContractError("bills file '" + config.bills.string() + "' contains no documents");
  MergeSummary merge;
  if (config.lobby_counts) merge = merge_lobby_counts(corpus, read_lobby_counts(*config.lobby_counts));
  Corpus kept = apply_length_filter(corpus, config.max_words);

  std::vector<fs::path> artifacts;
  const fs::path& dir = config.output_dir;
  emit(artifacts, dir / "summary_bill_types.csv", bill_type_csv(kept));
  emit(artifacts, dir / "summary_subjects.csv", subject_csv(kept));
  Histogram words = word_count_histogram(corpus, kWordCountEdges);
  emit(artifacts, dir / "word_count_histogram.csv", histogram_csv(words, false));
  emit(artifacts, dir / "word_count_histogram.svg",
       plot::bar_chart_svg("Distribution of bill length (words)", histogram_bars(words)));
  emit(artifacts, dir / "intensity_histogram.csv", histogram_csv(intensity_histogram(kept, kIntensityBinEdges)));

  std::size_t known = 0;
  for (const BillDocument& doc : kept) known += doc.lobby_count ? 1 : 0;
  emit(artifacts, dir / "ingest_summary.csv",
       metrics_csv({{"documents_read", std::to_string(corpus.size())},
                    {"dropped_length_filter", std::to_string(corpus.size() - kept.size())},
                    {"documents_kept", std::to_string(kept.size())},
                    {"known_lobby_count", std::to_string(known)},
                    {"unknown_lobby_count", std::to_string(kept.size() - known)},
                    {"counts_merged", std::to_string(merge.merged)},
                    {"counts_unmatched_ids", std::to_string(merge.unmatched_ids)}}));
  return finish(config, "ingest", std::move(artifacts));
}

CommandResult cmd_train_eval(const ExperimentConfig& config) {
  prepare(config);
  Corpus corpus = apply_length_filter(load_corpus(config), config.max_words);
  ExperimentSpec spec = config.experiment_spec();
  ExperimentResult result = run_experiment(corpus, spec);

  std::vector<fs::path> artifacts;
  emit(artifacts, config.output_dir / "report.csv", report_header_csv() + report_row_csv(spec, result));

  std::ostringstream tuning;
  csv::write_row(tuning, {"trial", "params", "val_auc", "error"});
  for (std::size_t i = 0; i < result.search.trials.size(); ++i) {
    const Trial& t = result.search.trials[i];
    csv::write_row(tuning, {std::to_string(i), to_string(t.params),
                            t.val_auc ? csv::format_double(*t.val_auc) : "", t.error});
  }
  emit(artifacts, config.output_dir / "tuning.csv", tuning.str());

  std::ostringstream predictions;
  csv::write_row(predictions, {"bill_id", "probability"});
  for (const auto& [id, p] : result.test_predictions) csv::write_row(predictions, {id, csv::format_double(p)});
  emit(artifacts, config.output_dir / "test_predictions.csv", predictions.str());

  fs::path model_path = config.effective_model_file();
  save_model(*result.classifier, model_path);
  artifacts.push_back(model_path);
  return finish(config, "train-eval", std::move(artifacts));
}

CommandResult cmd_explain(const ExperimentConfig& config) {
  prepare(config);
  FeatureReport report;
  if (config.subject) {
    SubjectReportSpec spec;
    spec.cleaning = config.cleaning();
    spec.features.kind = config.features;
    spec.features.max_features = config.max_features;
    report = subject_report(apply_length_filter(load_corpus(config), config.max_words), *config.subject,
                            config.scheme, spec, config.k);
  } else {
    TrainedClassifier classifier = load_model(config.effective_model_file());
    const auto* logistic = std::get_if<LogisticModel>(&classifier.model());
    if (!logistic) throw ContractError("explain needs a logistic model; the model file holds a forest");
    report = top_features(*logistic, classifier.pipeline().vocabulary(), config.k, logistic->trained_on, "all");
  }
  std::vector<fs::path> artifacts;
  emit(artifacts, config.output_dir / ("features_" + scope_slug(report.scope) + ".csv"), feature_report_csv(report));
  for (const fs::path& p : write_feature_plots(report, config.output_dir)) artifacts.push_back(p);
  return finish(config, "explain", std::move(artifacts));
}

CommandResult cmd_score_unlabeled(const ExperimentConfig& config) {
  prepare(config);
  Corpus corpus = apply_length_filter(load_corpus(config), config.max_words);
  const RotationSettings& r = config.rotation;
  PoolResult pool = filter_pool(corpus, r.filters);
  if (pool.pool.size() < r.num_batches) {
    throw ContractError("unlabeled pool has " + std::to_string(pool.pool.size()) +
                        " bills after filtering; at least rotation.num_batches = " + std::to_string(r.num_batches) +
                        " are needed");
  }
  Corpus positives = select_positives(corpus, r.positive_scheme);
  if (positives.empty()) throw ContractError("no positive bills under " + r.positive_scheme.name());

  RotationConfig rotation{r.num_batches, *config.seed, r.positive_scheme, r.filters};
  RotationModelSpec spec;
  spec.cleaning = config.cleaning();
  spec.features = FeatureSpec{config.features, r.ngrams, config.max_features, true};
  LogisticParams logistic;
  logistic.C = r.C;
  spec.model = logistic;
  RotationResult scored = rotation_score(positives, pool.pool, rotation, spec);

  std::vector<fs::path> artifacts;
  const fs::path& dir = config.output_dir;
  emit(artifacts, dir / "unlabeled_scores.csv", scores_csv(scored.scores));

  std::ostringstream batches;
  csv::write_row(batches, {"bill_id", "batch"});
  for (std::size_t b = 0; b < scored.batches.size(); ++b) {
    for (const std::string& id : scored.batches[b]) csv::write_row(batches, {id, std::to_string(b)});
  }
  emit(artifacts, dir / "rotation_batches.csv", batches.str());

  QuarterSeries trend = quarter_trend(scored.scores, corpus, r.trend_thresholds);
  emit(artifacts, dir / "quarter_trend.csv", quarter_series_csv(trend));
  std::vector<std::string> quarters;
  std::vector<plot::Series> series;
  for (double t : trend.thresholds) series.push_back({"share > " + csv::format_double(t), {}});
  for (const QuarterPoint& p : trend.points) {
    quarters.push_back(std::to_string(p.year) + "Q" + std::to_string(p.quarter));
    for (std::size_t i = 0; i < p.shares.size(); ++i) series[i].values.push_back(p.shares[i]);
  }
  emit(artifacts, dir / "quarter_trend.svg",
       plot::line_chart_svg("Share of unlabeled bills with evidence of lobbying", quarters, series));

  emit(artifacts, dir / "subject_table.csv",
       subject_table_csv(subject_table(scored.scores, corpus, r.subject_thresholds)));
  emit(artifacts, dir / "top_bills.csv", top_bills_csv(top_k_report(scored.scores, corpus, config.k)));
  emit(artifacts, dir / "pool_summary.csv",
       metrics_csv({{"pool_size", std::to_string(pool.pool.size())},
                    {"positives", std::to_string(positives.size())},
                    {"excluded_known_count", std::to_string(pool.excluded_known_count)},
                    {"excluded_undated", std::to_string(pool.excluded_undated)},
                    {"excluded_before_min_year", std::to_string(pool.excluded_year)},
                    {"excluded_short", std::to_string(pool.excluded_short)}}));
  return finish(config, "score-unlabeled", std::move(artifacts));
}

fs::path write_manifest(const ExperimentConfig& config, const std::string& command,
                        const std::vector<fs::path>& artifacts) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["config_hash"] = config.hash();
  doc["seed"] = config.seed ? nlohmann::ordered_json(*config.seed) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const fs::path& p : artifacts) {
    fs::path shown = p.lexically_relative(config.output_dir);
    if (shown.empty() || *shown.begin() == "..") shown = p;
    files.push_back({{"path", shown.generic_string()}, {"sha256", sha256_file_hex(p)}, {"bytes", fs::file_size(p)}});
  }
  doc["artifacts"] = files;
  doc["config"] = nlohmann::ordered_json::parse(config.to_json().dump());
  fs::path path = config.output_dir / ("manifest_" + command + ".json");
  csv::write_file(path, doc.dump(2) + "\n");
  return path;
}

}  // namespace lobbyml
