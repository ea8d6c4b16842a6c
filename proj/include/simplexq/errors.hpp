#pragma once

#include <stdexcept>
#include <string>

namespace simplexq {

// Parameter and domain violations (bad K, x outside [0,1], malformed input).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failures that carry context: non-convergent iterations, bracket
// failures, quadrature that cannot reach the requested tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// File-system failures (missing or unreadable dataset, unwritable output).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Input parse failures (datasets, joint distribution files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace simplexq
