#pragma once

#include <stdexcept>
#include <string>

namespace opmeans {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A scalar function was asked to act outside its domain (log of a
// non-positive eigenvalue, tabulated function outside its grid, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The inverse of a scalar map was asked for a value outside its range.
class InverseDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An identity was requested whose hypotheses the inputs do not meet.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Malformed file or JSON payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace opmeans
