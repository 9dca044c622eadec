#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgis {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the edge-list reader; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A cover that is not a family of independent sets (or whose partitions overlap).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling gave up before finding an independent set.
class RejectionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rgis
