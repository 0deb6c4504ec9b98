#pragma once

#include <stdexcept>
#include <string>

namespace relhom {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ModulusMismatch : public Error {
 public:
  using Error::Error;
};

/// A morphism, complex or chain map failed its structural invariant.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The requested degree needs more resolution depth than was supplied.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// A degreewise preimage required by a lifting step does not exist.
class NoPreimage : public Error {
 public:
  using Error::Error;
};

class NotXQuasiIso : public Error {
 public:
  using Error::Error;
};

class PdExceedsBudget : public Error {
 public:
  using Error::Error;
};

class NotXAcyclicInput : public Error {
 public:
  using Error::Error;
};

class UnsupportedSubcategory : public Error {
 public:
  using Error::Error;
};

/// Raised when a cooperative cancellation request is observed.
class Cancelled : public Error {
 public:
  using Error::Error;
};

/// Malformed literal or configuration value.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace relhom
