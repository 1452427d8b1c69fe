#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "rtsa/types.hpp"

namespace rtsa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A drift or noise value with a NaN/Inf component was fed to the iterator.
class NonFiniteError : public Error {
 public:
  NonFiniteError(StepIndex step, const std::string& what)
      : Error("non-finite " + what + " at step " + std::to_string(step)),
        step_(step) {}

  StepIndex step() const noexcept { return step_; }

 private:
  StepIndex step_;
};

/// A matrix required to have spectrum in the open right half plane does not.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& context, std::complex<double> eigenvalue);

  std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::complex<double> eigenvalue_;
};

/// gamma*A - I/2 is not positive definite (alpha = 1 regime).
class H5Violation : public Error {
 public:
  explicit H5Violation(double min_eigenvalue);

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0);

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace rtsa
