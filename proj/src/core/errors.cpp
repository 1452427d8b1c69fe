#include "rtsa/errors.hpp"

#include <sstream>

namespace rtsa {
namespace {

std::string describe(std::complex<double> z) {
  std::ostringstream out;
  out.precision(12);
  out << z.real();
  if (z.imag() != 0.0) out << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return out.str();
}

}  // namespace

StabilityError::StabilityError(const std::string& context,
                               std::complex<double> eigenvalue)
    : Error(context + ": eigenvalue " + describe(eigenvalue) +
            " does not have positive real part"),
      eigenvalue_(eigenvalue) {}

H5Violation::H5Violation(double min_eigenvalue)
    : Error("H5 violated: gamma*A - I/2 is positive definite fails, minimal eigenvalue " +
            describe(min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue) {}

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : Error("config error" + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) +
            " in field '" + field + "': " + message),
      field_(std::move(field)),
      line_(line) {}

}  // namespace rtsa
