#pragma once
#include <stdexcept>
#include <string>

namespace padyn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// The requested digits are not determined by the known precision.
struct PrecisionExhausted : Error {
  using Error::Error;
};

struct NoRootError : DomainError {
  using DomainError::DomainError;
};

struct DivisionByZero : DomainError {
  using DomainError::DomainError;
};

struct ParseError : Error {
  using Error::Error;
};

struct CapExceeded : Error {
  using Error::Error;
};

}  // namespace padyn
