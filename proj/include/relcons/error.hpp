#pragma once

#include <stdexcept>
#include <string>

namespace relcons {

/// Base of every error raised by the library. The CLI maps subclasses to
/// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside its valid domain (accuracy above n*b, n < 1, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An (a, c) pair that no correctness pattern can produce.
class InfeasibleScoreError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for the requested bundle size.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Input data is well-formed but semantically invalid.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace relcons
