#include "rtsa/truncated_iterator.hpp"

#include "rtsa/errors.hpp"

namespace rtsa {

bool all_finite(const Vector& v) noexcept { return v.allFinite(); }

void advance_truncated(TruncatedState& state, StepRecord& record,
                       const GainSchedule& schedule, const CompactFamily& family,
                       const Vector& drift_value, const Vector& noise) {
  if (!drift_value.allFinite()) throw NonFiniteError(state.n, "drift value");
  if (!noise.allFinite()) throw NonFiniteError(state.n, "noise draw");

  const double g = schedule.gain(state.n + 1);
  record.x_half.noalias() = state.x - g * (drift_value + noise);
  record.dm = noise;
  record.truncated = !family.contains(state.sigma, record.x_half);
  if (record.truncated) {
    record.p.noalias() = drift_value + noise + (state.x0 - state.x) / g;
    state.x = state.x0;
    ++state.sigma;
  } else {
    record.p.setZero(state.x.size());
    state.x = record.x_half;
  }
  ++state.n;
}

std::pair<TruncatedState, StepRecord> step_truncated(
    const TruncatedState& state, const GainSchedule& schedule,
    const CompactFamily& family, const Vector& drift_value, const Vector& noise) {
  std::pair<TruncatedState, StepRecord> out{state, StepRecord{}};
  advance_truncated(out.first, out.second, schedule, family, drift_value, noise);
  return out;
}

RobbinsMonroStep step_robbins_monro(const Vector& x, const GainSchedule& schedule,
                                    const Vector& drift_value, const Vector& noise,
                                    StepIndex n) {
  if (!x.allFinite()) throw NonFiniteError(n, "iterate");
  const double g = schedule.gain(n + 1);
  RobbinsMonroStep step;
  step.x = x - g * (drift_value + noise);
  step.diverged = !step.x.allFinite();
  return step;
}

RunResult run(const StochasticModel& model, const GainSchedule& schedule,
              const CompactFamily& family, const Vector& x0, StepIndex n_steps,
              std::uint64_t seed, const RunOptions& options) {
  if (x0.size() != model.dim() || family.dim() != model.dim()) {
    throw std::invalid_argument("run: dimension mismatch between x0, family and model");
  }
  RandomStream rng(seed, 0);
  RunResult result;
  result.final_state = TruncatedState::start(x0);
  TruncatedState& state = result.final_state;
  StepRecord record;
  Vector u(model.dim()), dm(model.dim());
  if (options.thin > 0) result.trajectory.push_back(state.x);

  for (StepIndex k = 0; k < n_steps; ++k) {
    model.drift(state.x, u);
    model.noise(state.x, rng, dm);
    advance_truncated(state, record, schedule, family, u, dm);
    if (record.truncated) result.truncation_steps.push_back(k);
    if (options.thin > 0 && state.n % options.thin == 0) result.trajectory.push_back(state.x);
  }
  return result;
}

RobbinsMonroRun run_robbins_monro(const StochasticModel& model,
                                  const GainSchedule& schedule, const Vector& x0,
                                  StepIndex n_steps, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  RobbinsMonroRun result;
  result.final_x = x0;
  Vector u(model.dim()), dm(model.dim());
  for (StepIndex k = 0; k < n_steps; ++k) {
    model.drift(result.final_x, u);
    model.noise(result.final_x, rng, dm);
    const double g = schedule.gain(k + 1);
    result.final_x -= g * (u + dm);
    ++result.steps_taken;
    if (!result.final_x.allFinite() || !u.allFinite() || !dm.allFinite()) {
      result.divergence_step = k;
      break;
    }
  }
  return result;
}

}  // namespace rtsa
