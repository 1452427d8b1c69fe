#pragma once

#include <cmath>

#include "rtsa/types.hpp"

namespace rtsa {

enum class Regime { alpha_lt_1, alpha_eq_1 };

const char* to_string(Regime regime) noexcept;

/// Step sizes gamma_n = gamma / (n + 1)^alpha with 1/2 < alpha <= 1.
///
/// The move from X_n to X_{n+1} uses gain(n + 1); see step_truncated.
class GainSchedule {
 public:
  /// Throws std::invalid_argument unless gamma > 0 and 0.5 < alpha <= 1.
  GainSchedule(double gamma, double alpha);

  double gain(StepIndex n) const noexcept {
    return gamma_ / std::pow(static_cast<double>(n) + 1.0, alpha_);
  }

  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  Regime regime() const noexcept {
    return alpha_ == 1.0 ? Regime::alpha_eq_1 : Regime::alpha_lt_1;
  }

  friend bool operator==(const GainSchedule&, const GainSchedule&) = default;

 private:
  double gamma_;
  double alpha_;
};

}  // namespace rtsa
