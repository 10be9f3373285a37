#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttalab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, non-finite values, out-of-range
/// indices, invalid configuration fields.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The (regularized) Gamma matrix cannot be inverted at working precision.
class SingularGamma : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach a KKT point.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Failure while reading a prediction file. Row and column are 1-based
/// (row 1 is the header for CSV); 0 means "not applicable".
class ParseError : public Error {
 public:
  enum class Kind { MissingColumn, RaggedRows, NonNumericCell, EmptyFile, Malformed };

  ParseError(Kind kind, std::string message, std::size_t row = 0, std::size_t column = 0);

  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t row_;
  std::size_t column_;
};

const char* to_string(ParseError::Kind kind) noexcept;

}  // namespace ttalab
