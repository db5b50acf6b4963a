#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swapvote {

// Precondition violated by the caller's data (bad subset, mismatched
// dimensions, duplicate ids, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact profile requested for a process/size combination we refuse to
// compute exactly (TM with three or more alternatives).
class UnsupportedExactError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Alternative set too large for dense ranking enumeration.
class SizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Non-finite value produced where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swapvote
