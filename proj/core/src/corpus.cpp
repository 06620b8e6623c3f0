#include "lobbyml/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lobbyml/csv.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/random.hpp"

namespace lobbyml {
namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<BillType, std::string_view>, 8> kBillTypeNames{{
    {BillType::HR, "H.R."},
    {BillType::S, "S."},
    {BillType::HRes, "H.Res."},
    {BillType::SRes, "S.Res."},
    {BillType::HConRes, "H.Con.Res."},
    {BillType::SConRes, "S.Con.Res."},
    {BillType::HJRes, "H.J.Res."},
    {BillType::SJRes, "S.J.Res."},
}};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& source,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(source, line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

BillDocument parse_document(const json& obj, const std::string& source, std::size_t line) {
  if (!obj.is_object()) throw ParseError(source, line, "expected a JSON object");
  BillDocument doc;

  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw ParseError(source, line, "missing or invalid 'id' field");
  }
  doc.id = id->get<std::string>();

  auto text = obj.find("text");
  if (text == obj.end() || !text->is_string()) {
    throw ParseError(source, line, "missing or invalid 'text' field");
  }
  doc.raw_text = text->get<std::string>();
  doc.word_count = count_words(doc.raw_text);

  if (auto type = optional_string(obj, "bill_type", source, line)) {
    doc.bill_type = parse_bill_type(*type);
    if (!doc.bill_type) throw ParseError(source, line, "unknown bill_type '" + *type + "'");
  }
  if (auto it = obj.find("congress"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() <= 0) {
      throw ParseError(source, line, "'congress' must be a positive integer");
    }
    doc.congress = it->get<int>();
  }
  doc.title = optional_string(obj, "title", source, line);
  doc.subject = optional_string(obj, "subject", source, line);
  if (auto date = optional_string(obj, "introduced_date", source, line)) {
    doc.introduced_date = Date::parse_iso(*date);
    if (!doc.introduced_date) throw ParseError(source, line, "invalid introduced_date '" + *date + "'");
  }
  if (auto it = obj.find("lobby_count"); it != obj.end() && !it->is_null() &&
                                          !(it->is_string() && it->get<std::string>() == "unknown")) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      throw ParseError(source, line, "'lobby_count' must be a non-negative integer");
    }
    doc.lobby_count = it->get<std::uint64_t>();
  }
  return doc;
}

bool parse_uint(std::string_view text, std::uint64_t& out) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void check_edges(const std::vector<std::uint64_t>& edges) {
  if (edges.empty()) throw ContractError("histogram needs at least one bin edge");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw ContractError("histogram bin edges must be strictly ascending");
  }
}

Histogram empty_histogram(const std::vector<std::uint64_t>& edges) {
  check_edges(edges);
  Histogram h;
  h.labels.push_back(edges[0] == 0 ? "0" : "<=" + std::to_string(edges[0]));
  for (std::size_t i = 1; i < edges.size(); ++i) {
    h.labels.push_back("(" + std::to_string(edges[i - 1]) + "," + std::to_string(edges[i]) + "]");
  }
  h.labels.push_back("(" + std::to_string(edges.back()) + ",inf)");
  h.counts.assign(h.labels.size(), 0);
  return h;
}

std::size_t bin_of(const std::vector<std::uint64_t>& edges, std::uint64_t value) {
  // First edge >= value; values above the last edge land in the overflow bin.
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), value) - edges.begin());
}

}  // namespace

std::string_view to_string(BillType type) {
  for (const auto& [t, name] : kBillTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<BillType> parse_bill_type(std::string_view text) {
  for (const auto& [t, name] : kBillTypeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::optional<Date> Date::parse_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len, int& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc() && ptr == text.data() + pos + len;
  };
  int y = 0, m = 0, d = 0;
  if (!number(0, 4, y) || !number(5, 2, m) || !number(8, 2, d)) return std::nullopt;
  if (m < 1 || m > 12 || d < 1) return std::nullopt;
  static constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  int max_day = kDays[m - 1] + (m == 2 && leap ? 1 : 0);
  if (d > max_day) return std::nullopt;
  return Date{y, static_cast<unsigned>(m), static_cast<unsigned>(d)};
}

std::string Date::iso() const {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", year, month, day);
  return buffer;
}

std::size_t count_words(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

Corpus parse_corpus(std::istream& in, const std::string& source) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    BillDocument doc = parse_document(obj, source, line_no);
    if (!seen.insert(doc.id).second) {
      throw ParseError(source, line_no, "duplicate id '" + doc.id + "'");
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

Corpus ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open bills file " + path.string());
  return parse_corpus(in, path.string());
}

std::unordered_map<std::string, std::uint64_t> parse_lobby_counts(std::istream& in,
                                                                  const std::string& source) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    std::vector<std::string> fields;
    try {
      fields = csv::parse_line(line);
    } catch (const ContractError& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "bill_id" || fields[1] != "count") {
        throw ParseError(source, line_no, "expected header bill_id,count");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 2 || fields[0].empty()) throw ParseError(source, line_no, "expected bill_id,count");
    std::uint64_t count = 0;
    if (!parse_uint(fields[1], count)) {
      throw ParseError(source, line_no, "count must be a non-negative integer");
    }
    if (!counts.emplace(fields[0], count).second) {
      throw ParseError(source, line_no, "duplicate bill_id '" + fields[0] + "'");
    }
  }
  if (!header_seen) throw ParseError(source, 1, "missing header bill_id,count");
  return counts;
}

std::unordered_map<std::string, std::uint64_t> read_lobby_counts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open lobby-count file " + path.string());
  return parse_lobby_counts(in, path.string());
}

MergeSummary merge_lobby_counts(Corpus& corpus,
                                const std::unordered_map<std::string, std::uint64_t>& counts) {
  MergeSummary summary;
  std::size_t matched = 0;
  for (BillDocument& doc : corpus) {
    auto it = counts.find(doc.id);
    if (it == counts.end()) continue;
    ++matched;
    if (doc.lobby_count && *doc.lobby_count != it->second) {
      throw ContractError("conflicting lobby_count for '" + doc.id + "': " +
                          std::to_string(*doc.lobby_count) + " in bills file, " +
                          std::to_string(it->second) + " in counts file");
    }
    doc.lobby_count = it->second;
    ++summary.merged;
  }
  summary.unmatched_ids = counts.size() - matched;
  return summary;
}

Corpus apply_length_filter(const Corpus& corpus, std::size_t max_words) {
  if (max_words == 0) throw ContractError("max_words must be >= 1");
  Corpus out;
  for (const BillDocument& doc : corpus) {
    if (doc.word_count <= max_words) out.push_back(doc);
  }
  return out;
}

LabelingScheme LabelingScheme::custom(std::uint64_t positive_min) {
  if (positive_min < 1) throw ContractError("positive_min must be >= 1");
  return {SchemeId::Custom, positive_min};
}

LabelingScheme LabelingScheme::parse(std::string_view text) {
  if (text == "D1") return d1();
  if (text == "D2") return d2();
  if (text == "D3") return d3();
  if (text.starts_with("min=")) {
    std::uint64_t n = 0;
    if (parse_uint(text.substr(4), n)) return custom(n);
  }
  throw ContractError("unknown labeling scheme '" + std::string(text) + "' (expected D1, D2, D3 or min=<n>)");
}

std::string LabelingScheme::name() const {
  switch (id) {
    case SchemeId::D1: return "D1";
    case SchemeId::D2: return "D2";
    case SchemeId::D3: return "D3";
    case SchemeId::Custom: break;
  }
  return "min=" + std::to_string(positive_min);
}

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count_if(examples.begin(), examples.end(),
                                                [](const LabeledExample& e) { return e.label == 1; }));
}

LabeledDataset build_labeled_dataset(const Corpus& corpus, const LabelingScheme& scheme) {
  if (scheme.positive_min < 1) throw ContractError("positive_min must be >= 1");
  LabeledDataset out;
  out.scheme = scheme;
  for (const BillDocument& doc : corpus) {
    if (!doc.lobby_count) throw ContractError("bill '" + doc.id + "' has unknown lobby_count");
    std::uint64_t count = *doc.lobby_count;
    if (count == 0) {
      out.examples.push_back({doc.id, 0});
    } else if (count >= scheme.positive_min) {
      out.examples.push_back({doc.id, 1});
    } else {
      out.excluded_ids.push_back(doc.id);
    }
  }
  return out;
}

DatasetSplit split_dataset(const LabeledDataset& labeled, std::uint64_t seed) {
  const std::size_t n = labeled.examples.size();
  if (n < 10) throw ContractError("split_dataset needs at least 10 examples, got " + std::to_string(n));

  std::vector<LabeledExample> pos, neg;
  for (const LabeledExample& e : labeled.examples) (e.label == 1 ? pos : neg).push_back(e);

  Rng rng(seed);
  rng.shuffle(std::span(pos));
  rng.shuffle(std::span(neg));

  auto round_size = [](double x) { return static_cast<std::size_t>(std::llround(x)); };
  const std::size_t n_train = round_size(kTrainFraction * static_cast<double>(n));
  const std::size_t n_val = round_size(kValidationFraction * static_cast<double>(n));

  // Negatives fill the remaining slots; positives are shifted in when
  // negatives run short.
  std::size_t pos_train = std::min(round_size(kTrainFraction * static_cast<double>(pos.size())), n_train);
  std::size_t neg_train = n_train - pos_train;
  if (neg_train > neg.size()) {
    pos_train += neg_train - neg.size();
    neg_train = neg.size();
  }
  std::size_t pos_val = std::min(round_size(kValidationFraction * static_cast<double>(pos.size())), n_val);
  pos_val = std::min(pos_val, pos.size() - pos_train);
  std::size_t neg_val = n_val - pos_val;
  if (neg_train + neg_val > neg.size()) {
    std::size_t shortfall = neg_train + neg_val - neg.size();
    pos_val += shortfall;
    neg_val -= shortfall;
  }

  DatasetSplit split;
  split.seed = seed;
  auto take = [](std::vector<LabeledExample>& into, const std::vector<LabeledExample>& from,
                 std::size_t begin, std::size_t count) {
    into.insert(into.end(), from.begin() + static_cast<std::ptrdiff_t>(begin),
                from.begin() + static_cast<std::ptrdiff_t>(begin + count));
  };
  take(split.train, pos, 0, pos_train);
  take(split.train, neg, 0, neg_train);
  take(split.validation, pos, pos_train, pos_val);
  take(split.validation, neg, neg_train, neg_val);
  take(split.test, pos, pos_train + pos_val, pos.size() - pos_train - pos_val);
  take(split.test, neg, neg_train + neg_val, neg.size() - neg_train - neg_val);
  rng.shuffle(std::span(split.train));
  rng.shuffle(std::span(split.validation));
  rng.shuffle(std::span(split.test));
  return split;
}

std::size_t Histogram::total() const {
  std::size_t sum = unknown;
  for (std::size_t c : counts) sum += c;
  return sum;
}

Histogram intensity_histogram(const Corpus& corpus, const std::vector<std::uint64_t>& bin_edges) {
  Histogram h = empty_histogram(bin_edges);
  for (const BillDocument& doc : corpus) {
    if (!doc.lobby_count) {
      ++h.unknown;
    } else {
      ++h.counts[bin_of(bin_edges, *doc.lobby_count)];
    }
  }
  return h;
}

Histogram word_count_histogram(const Corpus& corpus, const std::vector<std::uint64_t>& bin_edges) {
  Histogram h = empty_histogram(bin_edges);
  for (const BillDocument& doc : corpus) ++h.counts[bin_of(bin_edges, doc.word_count)];
  return h;
}

std::string histogram_csv(const Histogram& histogram, bool include_unknown) {
  std::ostringstream out;
  csv::write_row(out, {"bin", "count"});
  for (std::size_t i = 0; i < histogram.labels.size(); ++i) {
    csv::write_row(out, {histogram.labels[i], std::to_string(histogram.counts[i])});
  }
  if (include_unknown) csv::write_row(out, {"unknown", std::to_string(histogram.unknown)});
  return out.str();
}

std::unordered_map<std::string, std::size_t> index_by_id(const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus[i].id, i);
  return index;
}

}  // namespace lobbyml
