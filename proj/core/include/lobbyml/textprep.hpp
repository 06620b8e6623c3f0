#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lobbyml {

using TokenSequence = std::vector<std::string>;

struct StopwordSet {
  std::string name;
  std::set<std::string> words;

  bool contains(std::string_view token) const { return words.find(std::string(token)) != words.end(); }
  bool operator==(const StopwordSet&) const = default;
};

// One token per line, '#' starts a comment. Entries are lowercased.
StopwordSet parse_stopwords(std::string_view text, std::string name);
StopwordSet load_stopwords(const std::filesystem::path& path, std::string name);

StopwordSet default_english_stopwords();
StopwordSet default_law_stopwords();

// Rule-based English lemmatizer. An exception table is consulted first;
// otherwise plural (-s, -es, -ies), -ing and -ed suffix rules apply to purely
// alphabetic tokens, each requiring a stem of at least three letters. Rules
// are re-applied until the token stops changing.
class Lemmatizer {
 public:
  // Uses the bundled exception table.
  Lemmatizer();
  explicit Lemmatizer(std::map<std::string, std::string> exceptions);

  // "form lemma" pairs, one per line, '#' comments.
  static Lemmatizer parse(std::string_view text, const std::string& source = "<table>");
  static Lemmatizer load(const std::filesystem::path& path);

  std::string lemmatize(std::string_view token) const;

  const std::map<std::string, std::string>& exceptions() const { return exceptions_; }
  bool operator==(const Lemmatizer& other) const { return exceptions_ == other.exceptions_; }

 private:
  std::string apply_once(const std::string& token) const;

  std::map<std::string, std::string> exceptions_;
};

struct CleaningConfig {
  bool lowercase = true;
  bool strip_numbers = true;
  bool strip_punctuation = true;
  std::vector<StopwordSet> stopword_lists;
  bool lemmatize = true;
  std::optional<std::size_t> max_tokens;
  Lemmatizer lemmatizer;

  // lowercase, numbers, punctuation, english + law stopwords, lemmatization.
  static CleaningConfig standard();

  // Throws ContractError when a stopword entry is not lowercase or contains
  // whitespace, or when max_tokens == 0.
  void validate() const;

  // Canonical JSON-serializable description; equal configs hash equally.
  std::string canonical() const;
  std::string hash() const;
};

// Fixed order: lowercase, replace characters outside [a-z0-9] with spaces,
// split on whitespace, drop numeric tokens, drop stopwords, lemmatize,
// drop stopwords again, truncate to max_tokens.
TokenSequence clean(std::string_view text, const CleaningConfig& config);

// Purely numeric: digits with optional '.' and ',' separators.
bool is_numeric_token(std::string_view token);

std::string join_tokens(const TokenSequence& tokens);

}  // namespace lobbyml
