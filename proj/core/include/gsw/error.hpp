#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsw {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("parse error at column " + std::to_string(position + 1) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Operands that disagree on the number of modes or on array shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A caller-side precondition that does not hold (non-real h, k <= 0, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical preconditions: inadequate Fock truncation, dimension caps,
/// trajectory blow-up.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BlowUpError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace gsw
