#pragma once

#include <stdexcept>
#include <string>

namespace npoint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured cap (n, genus, degree, ...) was exceeded.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested precision or truncation cannot be met at the given argument.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An iterative or refining procedure failed to reach its target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Lower-order data (table entries, coefficients) needed by a computation is absent.
class MissingDataError : public Error {
 public:
  using Error::Error;
};

/// Stored data violates an invariant (dimension constraint, zero denominator, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace npoint
