#pragma once

#include <stdexcept>
#include <string>

namespace bridge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter record violates the preconditions of the operation.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is not defined for this model family.
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// The integrator could not take a single step (inconsistent tolerances).
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

}  // namespace bridge
