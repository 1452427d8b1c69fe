#include "rtsa/gain_schedule.hpp"

#include <stdexcept>
#include <string>

namespace rtsa {

const char* to_string(Regime regime) noexcept {
  return regime == Regime::alpha_eq_1 ? "alpha_eq_1" : "alpha_lt_1";
}

GainSchedule::GainSchedule(double gamma, double alpha) : gamma_(gamma), alpha_(alpha) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gain schedule: gamma must be positive, got " +
                                std::to_string(gamma));
  }
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument("gain schedule: alpha must lie in (1/2, 1], got " +
                                std::to_string(alpha));
  }
}

}  // namespace rtsa
