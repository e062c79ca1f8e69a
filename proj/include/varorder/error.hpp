#pragma once

#include <stdexcept>
#include <string>

namespace varorder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: shapes, non-Hermitian matrices, malformed tables.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

/// Iterative eigensolver exceeded its sweep cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Two routes that must agree did not; indicates a numerical or logic fault.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A q-matrix that no finite spectrum could have produced.
class ReconstructionError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace varorder
