#pragma once

#include <stdexcept>
#include <string>

namespace lobbyml {

// Caller-side violations: malformed input, bad configuration, preconditions
// not met. The CLI maps these to exit code 2; anything else is exit code 1.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed line in an input file. line() is 1-based.
class ParseError : public ContractError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : ContractError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Unreadable, truncated or version-mismatched model file.
class ModelFormatError : public ContractError {
 public:
  using ContractError::ContractError;
};

}  // namespace lobbyml
