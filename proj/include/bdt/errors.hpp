#pragma once

#include <stdexcept>
#include <string>

namespace bdt {

// Caller passed something out of contract (bad vertex id, bad epsilon, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input object violates a model or family invariant (degree bound, self-loop,
// non-rooted pattern handed to an F-model tester, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph/configuration/family text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bdt
