#pragma once

#include <stdexcept>
#include <string>

namespace seriate {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalization of a constant matrix (max == min).
class DegenerateRangeError : public Error {
 public:
  using Error::Error;
};

/// Negative entry where a nonnegative domain is required.
class NegativeEntryError : public Error {
 public:
  using Error::Error;
};

/// Dimension or shape disagreement between operands.
class SizeMismatchError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf encountered where finite values are required.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar parameter (empty interval, zero count, ...).
class BadRangeError : public Error {
 public:
  using Error::Error;
};

class ZeroMatrixError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries 1-based line and column of the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace seriate
