#include "lobbyml/textprep.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lobbyml/bundled_data.hpp"
#include "lobbyml/error.hpp"
#include "lobbyml/hashing.hpp"

namespace lobbyml {
namespace {

constexpr int kMaxLemmaPasses = 16;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool has_vowel(std::string_view s) {
  for (char c : s) {
    if (is_vowel(c)) return true;
  }
  return false;
}

// "runn" -> "run", but "bill" and "pass" keep their double letter.
std::string undouble(std::string stem) {
  std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Splits text into lines with comments and surrounding whitespace removed;
// calls fn(line_number, content) for every non-empty line.
template <typename Fn>
void for_each_entry(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (!line.empty()) fn(line_no, line);
    pos = end + 1;
  }
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

StopwordSet parse_stopwords(std::string_view text, std::string name) {
  StopwordSet set{std::move(name), {}};
  for_each_entry(text, [&](std::size_t line_no, std::string_view entry) {
    for (char c : entry) {
      if (is_space(c)) {
        throw ParseError(set.name, line_no, "stopword entries must be single tokens");
      }
    }
    std::string word(entry);
    for (char& c : word) c = to_lower(c);
    set.words.insert(std::move(word));
  });
  return set;
}

StopwordSet load_stopwords(const std::filesystem::path& path, std::string name) {
  return parse_stopwords(read_text(path), std::move(name));
}

StopwordSet default_english_stopwords() { return parse_stopwords(bundled::english_stopwords(), "english"); }
StopwordSet default_law_stopwords() { return parse_stopwords(bundled::law_stopwords(), "law"); }

Lemmatizer::Lemmatizer() {
  static const std::map<std::string, std::string> table =
      parse(bundled::lemma_exceptions(), "lemma_exceptions.txt").exceptions();
  exceptions_ = table;
}

Lemmatizer::Lemmatizer(std::map<std::string, std::string> exceptions)
    : exceptions_(std::move(exceptions)) {
  for (const auto& [form, lemma] : exceptions_) {
    if (form.empty() || lemma.empty()) throw ContractError("empty lemma exception entry");
    if (lemmatize(lemma) != lemma) {
      throw ContractError("lemma '" + lemma + "' (for '" + form + "') is not a fixed point of the lemmatizer");
    }
  }
}

Lemmatizer Lemmatizer::parse(std::string_view text, const std::string& source) {
  std::map<std::string, std::string> table;
  for_each_entry(text, [&](std::size_t line_no, std::string_view entry) {
    auto tokens = split_whitespace(entry);
    if (tokens.size() != 2) throw ParseError(source, line_no, "expected '<form> <lemma>'");
    for (auto& t : tokens) {
      for (char& c : t) c = to_lower(c);
    }
    if (!table.emplace(tokens[0], tokens[1]).second) {
      throw ParseError(source, line_no, "duplicate form '" + tokens[0] + "'");
    }
  });
  return Lemmatizer(std::move(table));
}

Lemmatizer Lemmatizer::load(const std::filesystem::path& path) {
  return parse(read_text(path), path.string());
}

std::string Lemmatizer::apply_once(const std::string& w) const {
  if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
  for (char c : w) {
    if (!is_lower(c)) return w;
  }
  const std::size_t n = w.size();
  auto ends_with = [&](std::string_view suffix) { return w.ends_with(suffix); };

  if (ends_with("ies") && n - 3 >= 3) return w.substr(0, n - 3) + "y";
  if ((ends_with("sses") || ends_with("shes") || ends_with("ches") || ends_with("xes") ||
       ends_with("zzes")) &&
      n - 2 >= 3) {
    return w.substr(0, n - 2);
  }
  if (ends_with("s") && !ends_with("ss") && !ends_with("us") && !ends_with("is") && n - 1 >= 3) {
    return w.substr(0, n - 1);
  }
  if (ends_with("ing") && n - 3 >= 3 && has_vowel(std::string_view(w).substr(0, n - 3))) {
    return undouble(w.substr(0, n - 3));
  }
  if (ends_with("ed") && !ends_with("eed") && n - 2 >= 3 && has_vowel(std::string_view(w).substr(0, n - 2))) {
    return undouble(w.substr(0, n - 2));
  }
  return w;
}

std::string Lemmatizer::lemmatize(std::string_view token) const {
  std::string current(token);
  for (int pass = 0; pass < kMaxLemmaPasses; ++pass) {
    std::string next = apply_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

CleaningConfig CleaningConfig::standard() {
  CleaningConfig config;
  config.stopword_lists = {default_english_stopwords(), default_law_stopwords()};
  return config;
}

void CleaningConfig::validate() const {
  if (max_tokens && *max_tokens == 0) throw ContractError("max_tokens must be >= 1");
  for (const StopwordSet& set : stopword_lists) {
    for (const std::string& word : set.words) {
      if (word.empty()) throw ContractError("empty stopword in list '" + set.name + "'");
      for (char c : word) {
        if (is_upper(c) || is_space(c)) {
          throw ContractError("stopword '" + word + "' in list '" + set.name + "' is not a lowercase token");
        }
      }
    }
  }
}

std::string CleaningConfig::canonical() const {
  nlohmann::json doc;
  doc["lowercase"] = lowercase;
  doc["strip_numbers"] = strip_numbers;
  doc["strip_punctuation"] = strip_punctuation;
  doc["lemmatize"] = lemmatize;
  doc["max_tokens"] = max_tokens ? nlohmann::json(*max_tokens) : nlohmann::json(nullptr);
  nlohmann::json lists = nlohmann::json::array();
  for (const StopwordSet& set : stopword_lists) {
    lists.push_back({{"name", set.name}, {"words", set.words}});
  }
  doc["stopword_lists"] = std::move(lists);
  doc["lemma_exceptions"] = lemmatizer.exceptions();
  return doc.dump();
}

std::string CleaningConfig::hash() const { return sha256_hex(canonical()); }

bool is_numeric_token(std::string_view token) {
  bool digit = false;
  for (char c : token) {
    if (is_digit(c)) {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

TokenSequence clean(std::string_view text, const CleaningConfig& config) {
  std::string buffer(text);
  if (config.lowercase) {
    for (char& c : buffer) c = to_lower(c);
  }
  if (config.strip_punctuation) {
    for (char& c : buffer) {
      bool keep = is_lower(c) || is_digit(c) || (!config.lowercase && is_upper(c));
      if (!keep) c = ' ';
    }
  }

  std::unordered_set<std::string> stopwords;
  for (const StopwordSet& set : config.stopword_lists) stopwords.insert(set.words.begin(), set.words.end());
  auto is_stopword = [&](const std::string& t) { return stopwords.count(t) != 0; };

  TokenSequence tokens;
  for (std::string& token : split_whitespace(buffer)) {
    if (config.strip_numbers && is_numeric_token(token)) continue;
    if (is_stopword(token)) continue;
    if (config.lemmatize) {
      token = config.lemmatizer.lemmatize(token);
      if (is_stopword(token)) continue;
    }
    tokens.push_back(std::move(token));
    if (config.max_tokens && tokens.size() >= *config.max_tokens) break;
  }
  return tokens;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace lobbyml
