#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rtsa/compact_family.hpp"
#include "rtsa/gain_schedule.hpp"
#include "rtsa/stochastic_model.hpp"
#include "rtsa/types.hpp"

namespace rtsa {

/// (X_n, sigma_n, n) plus the reset value X_0.
struct TruncatedState {
  Vector x;
  StepIndex sigma = 0;
  StepIndex n = 0;
  Vector x0;

  static TruncatedState start(const Vector& x0) { return {x0, 0, 0, x0}; }

  friend bool operator==(const TruncatedState& a, const TruncatedState& b) {
    return a.sigma == b.sigma && a.n == b.n && a.x == b.x && a.x0 == b.x0;
  }
};

/// Diagnostics of one move X_n -> X_{n+1}.
///
/// p is the truncation term: zero on ordinary steps, and
/// u(X_n) + dM_{n+1} + (X_0 - X_n) / gamma_{n+1} on a reset.
struct StepRecord {
  Vector x_half;
  Vector p;
  Vector dm;
  bool truncated = false;
};

/// One step of the randomly truncated iteration.
///
/// The half step X_n - gamma_{n+1} (u + dM) is kept when it lies in
/// K_{sigma_n}; otherwise the iterate returns to X_0 and sigma increments.
/// Throws NonFiniteError (carrying state.n) if drift or noise is not finite.
std::pair<TruncatedState, StepRecord> step_truncated(
    const TruncatedState& state, const GainSchedule& schedule,
    const CompactFamily& family, const Vector& drift_value, const Vector& noise);

/// In-place form of step_truncated for hot loops; `record` buffers are reused.
void advance_truncated(TruncatedState& state, StepRecord& record,
                       const GainSchedule& schedule, const CompactFamily& family,
                       const Vector& drift_value, const Vector& noise);

struct RobbinsMonroStep {
  Vector x;
  bool diverged = false;  // some component overflowed to Inf/NaN
};

/// X_n - gamma_{n+1} (u(X_n) + dM_{n+1}). `n` is the index of X_n.
RobbinsMonroStep step_robbins_monro(const Vector& x, const GainSchedule& schedule,
                                    const Vector& drift_value, const Vector& noise,
                                    StepIndex n);

/// Additive form X_n - g u - g dM + g p of the same move.
///
/// The truncation term is held as an exact rational measured from the
/// computed half step, p = (X_0 - X_{n+1/2}) / g, and g p is added in exact
/// arithmetic before a single rounding. With that, the additive form equals
/// the case form bit for bit on both branches.
Vector additive_update(const Vector& x, double gain, const Vector& drift_value,
                       const Vector& noise, const Vector& x0, bool truncated);

struct RunOptions {
  /// Keep every `thin`-th iterate (including X_0). 0 keeps none.
  StepIndex thin = 0;
};

struct RunResult {
  TruncatedState final_state;
  std::vector<StepIndex> truncation_steps;  // n such that the move n -> n+1 reset
  std::vector<Vector> trajectory;
};

/// n_steps moves of the truncated algorithm driven by stream 0 of `seed`.
/// Deterministic in all arguments. Propagates NonFiniteError.
RunResult run(const StochasticModel& model, const GainSchedule& schedule,
              const CompactFamily& family, const Vector& x0, StepIndex n_steps,
              std::uint64_t seed, const RunOptions& options = {});

struct RobbinsMonroRun {
  Vector final_x;
  StepIndex steps_taken = 0;
  std::optional<StepIndex> divergence_step;
};

/// Plain Robbins-Monro baseline; stops at the first non-finite iterate.
RobbinsMonroRun run_robbins_monro(const StochasticModel& model,
                                  const GainSchedule& schedule, const Vector& x0,
                                  StepIndex n_steps, std::uint64_t seed);

bool all_finite(const Vector& v) noexcept;

}  // namespace rtsa
