#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace demorgan {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterated logarithm (or a level evaluated at some index) left its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A level's positivity threshold exceeds the representable index range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Too few indices past the level domain to form a tail window.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// No polynomial envelope a_n < r n^-alpha was found on the alpha grid.
class NoEnvelopeError : public Error {
 public:
  using Error::Error;
};

class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// A planted root value baseline + s/denom was not positive.
class NegativeBaseError : public Error {
 public:
  using Error::Error;
};

/// A level step map jumped to a level before that level's domain begins.
class StepError : public Error {
 public:
  using Error::Error;
};

class RateError : public Error {
 public:
  RateError(const std::string& what, std::int64_t row = -1)
      : Error(row >= 0 ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
  std::int64_t row() const noexcept { return row_; }

 private:
  std::int64_t row_;
};

/// Malformed input file; line is 1-based, -1 when not attributable to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace demorgan
