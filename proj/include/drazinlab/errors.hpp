#pragma once

#include <stdexcept>
#include <string>

namespace drazin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
class InputError : public Error {
public:
  using Error::Error;
};

/// Operand dimensions do not fit the operation.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A series was requested outside its certified disk of convergence.
class OutOfDiskError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

/// A relation that must hold mathematically was observed to fail. This always
/// indicates a numerical or programming defect, never bad user input.
class TheoremViolation : public Error {
public:
  using Error::Error;
};

/// The zero cluster of the spectrum cannot be separated from the rest.
class SpectralSplitError : public Error {
public:
  using Error::Error;
};

/// A computed subspace or block is too ill-conditioned to certify.
class ConditioningError : public Error {
public:
  using Error::Error;
};

/// A configured resource cap (for example operator bandwidth) was exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace drazin
