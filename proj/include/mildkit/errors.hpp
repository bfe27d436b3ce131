#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mildkit {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input or a violated operation precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A configured resource limit would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// The truncation degree is too small to decide the question.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed. Never expected on any input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mildkit
