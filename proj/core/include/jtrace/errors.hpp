#pragma once

#include <stdexcept>
#include <string>

namespace jtrace {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A spectrum or point lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold
/// (non-commuting tuple, non-unital column, centralizer violation, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Joint diagonalization failed every retry and the Jacobi fallback.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The simplex solver reached a state that a correct model cannot produce.
class LpError : public Error {
 public:
  using Error::Error;
};

/// Malformed campaign configuration or serialized document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace jtrace
