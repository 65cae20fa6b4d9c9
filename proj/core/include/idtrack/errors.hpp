#pragma once

#include <stdexcept>
#include <string>

namespace idtrack {

// All library errors derive from Error so callers can catch them in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class InvalidKernelError : public Error {
 public:
  using Error::Error;
};

class InvalidModelError : public Error {
 public:
  using Error::Error;
};

class InvalidBeliefError : public Error {
 public:
  using Error::Error;
};

/// All remaining mass sat on indices that had to be zeroed.
class DegenerateProjectionError : public Error {
 public:
  using Error::Error;
};

/// Tracked(l) reported although sensor l was off.
class InconsistentObservationError : public Error {
 public:
  using Error::Error;
};

/// Subset enumeration would exceed the configured support cap.
class ActionExplosionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InfeasibleBudgetError : public Error {
 public:
  using Error::Error;
};

class OracleTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace idtrack
