#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in incompatible rings (different moduli, series where a
/// scalar is required, ...).
class RingError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the arguments of an operation was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Text input did not match its grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// An enumeration would exceed the configured evaluation budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsg
