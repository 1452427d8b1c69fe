#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rtsa/gain_schedule.hpp"
#include "rtsa/types.hpp"

namespace rtsa::proofcheck {

/// Discretisation grid s_{n,0} = 0, s_{n,k} = s_{n,k-1} + gamma_{n+k}.
///
/// Values are extended lazily and cached, so a Grid must not be shared
/// across threads while it is still growing; extend() it first.
class Grid {
 public:
  Grid(StepIndex n, GainSchedule schedule);

  StepIndex base() const noexcept { return n_; }
  const GainSchedule& schedule() const noexcept { return schedule_; }

  /// s_{n,k}.
  double s(std::size_t k) const;
  /// gamma_{n+k}, the weight attached to index k.
  double gain(std::size_t k) const { return schedule_.gain(n_ + k); }
  /// Makes s(0..k) available without further allocation.
  void extend(std::size_t k) const;
  /// Smallest k with s_{n,k} >= target.
  std::size_t first_index_reaching(double target) const;

 private:
  StepIndex n_;
  GainSchedule schedule_;
  mutable std::vector<double> values_;
};

/// Per-step propagators F_k = exp(-Q gamma_{n+k}), k = 1..horizon, so that
/// exp(Q (s_{n,k} - s_{n,t})) = F_t F_{t-1} ... F_{k+1}.
///
/// Construction checks that Q is stable (StabilityError otherwise) and that
/// the running product F_k ... F_1 stays within 1e-8 (relative) of a direct
/// exp(-Q s_{n,k}) at every 64th step; a larger drift throws Error.
class ExponentialFactors {
 public:
  ExponentialFactors(const Grid& grid, const Matrix& q, std::size_t horizon);

  std::size_t horizon() const noexcept { return factors_.size(); }
  const Matrix& factor(std::size_t k) const { return factors_[k - 1]; }
  const Grid& grid() const noexcept { return grid_; }
  const Matrix& q() const noexcept { return q_; }
  /// Largest relative drift seen by the periodic re-check.
  double max_drift() const noexcept { return max_drift_; }

  /// sum_{k=0}^t exp(Q(s_k - s_t)) w_k v_k with v_k produced by `term`.
  /// `t` must not exceed horizon().
  template <class TermFn>
  Vector accumulate(std::size_t t, TermFn&& term, bool sqrt_weights) const;

 private:
  Grid grid_;
  Matrix q_;
  std::vector<Matrix> factors_;
  double max_drift_ = 0.0;
};

/// Z_t = sum_{k=0}^t exp(Q (s_{n,k} - s_{n,t})) gamma_{n+k} y_k.
/// `y` must hold at least t + 1 finite vectors.
Vector weighted_sum(const Grid& grid, const Matrix& q, std::size_t t, std::span<const Vector> y);

/// sum_{k=0}^t exp(Q (s_{n,k} - s_{n,t})) sqrt(gamma_{n+k}) dM_k 1{active_k}.
/// An empty `active` mask keeps every term.
Vector weighted_noise_sum(const Grid& grid, const Matrix& q, std::size_t t,
                          std::span<const Vector> dm, std::span<const std::uint8_t> active = {});

struct SeriesOptions {
  double tolerance = 1e-10;
  std::size_t max_terms = 10'000'000;
  std::size_t burn_in = 10'000;
};

/// V_n = sum_{k>=0} gamma_{n+k} exp(-Q s_{n,k}) Sigma exp(-Q s_{n,k})'.
/// Sums until a term falls below tolerance * |partial sum|. Throws
/// StabilityError for unstable Q and Error when the series stalls.
Matrix lemma3_variance(const Grid& grid, const Matrix& q, const Matrix& sigma,
                       const SeriesOptions& options = {});

/// Empirical covariance of the weighted noise sum over `replays`
/// independent N(0, I) noise sequences (stream r of `seed` for replay r).
/// OpenMP over replays; `threads` <= 0 uses the runtime default.
Matrix noise_sum_covariance(const ExponentialFactors& factors, std::size_t t,
                            std::size_t replays, std::uint64_t seed, int threads = 0);
/// Single-threaded reference for noise_sum_covariance.
Matrix noise_sum_covariance_serial(const ExponentialFactors& factors, std::size_t t,
                                   std::size_t replays, std::uint64_t seed);

struct PropertyResult {
  std::string name;
  bool passed = false;
  double observed_gap = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct BatteryOptions {
  /// Scalar Q = q; the matrix case uses diag(q, 2q).
  double q = 1.0;
  StepIndex n = 1000;
  std::size_t replays_percentile = 1000;
  std::size_t replays_variance = 10'000;
  std::uint64_t seed = 20240601;
  int threads = 0;
};

struct BatteryReport {
  std::vector<PropertyResult> properties;
  bool all_passed() const;
};

/// Grid recursion, weighted-sum limits, noise-sum variance series.
BatteryReport run_battery(const BatteryOptions& options = {});

// ---- template implementation ----

template <class TermFn>
Vector ExponentialFactors::accumulate(std::size_t t, TermFn&& term, bool sqrt_weights) const {
  const Eigen::Index d = q_.rows();
  Vector z(d), v(d), tmp(d);
  auto weight = [&](std::size_t k) {
    const double g = grid_.gain(k);
    return sqrt_weights ? std::sqrt(g) : g;
  };
  term(std::size_t{0}, v);
  z = weight(0) * v;
  for (std::size_t k = 1; k <= t; ++k) {
    term(k, v);
    tmp.noalias() = factors_[k - 1] * z;
    z = tmp + weight(k) * v;
  }
  return z;
}

}  // namespace rtsa::proofcheck
