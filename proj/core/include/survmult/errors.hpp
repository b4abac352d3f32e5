#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace survmult {

// Raised when a text input cannot be parsed. Carries the 1-based line number
// of the offending line (0 when the failure is not tied to a single line,
// e.g. an empty file).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                    : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Raised when an inverse-probability-of-censoring weight would divide by a
// censoring-survival value of zero. Carries the time at which the weight was
// requested.
class ScoringError : public std::runtime_error {
public:
  ScoringError(const std::string& message, double offending_time)
      : std::runtime_error(message + " (t=" + std::to_string(offending_time) + ")"),
        time_(offending_time) {}

  double offending_time() const noexcept { return time_; }

private:
  double time_;
};

}  // namespace survmult
