#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nwdag {

// Base of every error the library raises. The CLI maps all of these to exit
// code 1 (domain error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation that requires a valid DAG was handed one that fails validate().
class InvalidDag : public Error {
 public:
  using Error::Error;
};

// Vector/matrix length or architecture shape does not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared in an input or an intermediate result.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Path enumeration would exceed its budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Randomized construction ran out of attempts.
class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nwdag
