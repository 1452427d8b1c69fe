#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtsa/asymptotics.hpp"
#include "rtsa/compact_family.hpp"
#include "rtsa/gain_schedule.hpp"
#include "rtsa/problems.hpp"
#include "rtsa/stats.hpp"

namespace rtsa::montecarlo {

enum class Algorithm { truncated, robbins_monro };

const char* to_string(Algorithm algorithm) noexcept;
Algorithm algorithm_from_string(const std::string& name);

struct EnsembleConfig {
  problems::ProblemSpec problem;
  GainSchedule schedule{1.0, 1.0};
  CompactSpec family;
  std::vector<double> x0;  // empty: origin
  StepIndex n_steps = 1000;
  std::size_t replicates = 100;
  std::uint64_t base_seed = 1;
  std::vector<StepIndex> checkpoints;  // sorted, each <= n_steps; empty: {n_steps}
  Algorithm algorithm = Algorithm::truncated;
  /// Localisation radius of the restricted second moment; 0 selects min(1, mu/2).
  double eta = 0.0;
  /// Start N0 of the window sup_{N0 <= m <= n} |X_m - x*| <= eta; 0 selects
  /// the first checkpoint.
  StepIndex window_start = 0;

  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

/// Throws ConfigError naming the offending field.
void validate(const EnsembleConfig& config);

/// What one replicate leaves behind.
struct ReplicateOutcome {
  std::vector<Vector> deltas;        // Delta at each checkpoint reached
  std::vector<std::uint8_t> in_window;  // 1 if the path stayed within eta since N0
  StepIndex final_sigma = 0;
  std::optional<StepIndex> last_truncation;  // step index of the last reset
  bool diverged = false;
  StepIndex divergence_step = 0;
};

struct NormalityReport {
  std::size_t samples = 0;
  stats::KsResult mahalanobis;                // m_r = Delta' V^-1 Delta vs chi^2_d
  std::vector<stats::KsResult> coordinates;   // Delta_i vs N(0, V_ii)
  double cov_rel_err = 0.0;                   // |C_hat - V|_2 / |V|_2
  bool gaussian = true;                       // every KS p-value > 0.01
};

struct CheckpointSummary {
  StepIndex n = 0;
  std::size_t samples = 0;
  Vector mean;
  Matrix covariance;
  double cov_rel_err = 0.0;
  std::optional<NormalityReport> normality;  // absent when V is singular
  double restricted_second_moment = 0.0;     // E[|Delta_n|^2 ; A_n]
  double window_fraction = 0.0;              // P(A_n)
};

struct TruncationStats {
  std::map<StepIndex, std::size_t> histogram;  // final sigma -> replicate count
  std::size_t replicates = 0;
  double fraction_zero = 0.0;
  StepIndex max_sigma = 0;
  /// Share of replicates with no reset in the final half of the run.
  double fraction_stabilized = 0.0;
};

struct EnsembleSummary {
  asymptotics::LimitCovariance theory;
  std::vector<CheckpointSummary> checkpoints;
  TruncationStats truncation;
  std::size_t replicates = 0;
  std::size_t divergence_count = 0;
  double mu_hat = 0.0;
  double eta = 0.0;
};

struct EnsembleResult {
  EnsembleSummary summary;
  std::vector<StepIndex> checkpoints;
  std::vector<ReplicateOutcome> outcomes;  // indexed by replicate
};

/// One trajectory. Replicate r draws from Philox stream r keyed by base_seed.
ReplicateOutcome simulate_replicate(const problems::Problem& problem,
                                    const GainSchedule& schedule, const CompactFamily& family,
                                    const Vector& x0, StepIndex n_steps,
                                    std::span<const StepIndex> checkpoints, Algorithm algorithm,
                                    std::uint64_t base_seed, std::uint64_t replicate, double eta,
                                    StepIndex window_start);

/// M replicates in parallel (OpenMP; `threads` <= 0 uses the runtime
/// default). The summary is reduced in replicate order, so results are
/// bit-identical for any thread count. H5Violation is thrown before any
/// simulation when alpha = 1 and gamma A - I/2 is not positive definite.
EnsembleResult run_ensemble(const EnsembleConfig& config, int threads = 0);

/// Single-threaded reference for run_ensemble.
EnsembleResult run_ensemble_serial(const EnsembleConfig& config);

/// Requires V positive definite and at least 100 rows.
NormalityReport normality_report(const Matrix& samples, const Matrix& v);

TruncationStats truncation_stats(std::span<const ReplicateOutcome> outcomes, StepIndex n_steps);

/// Spectral norm |C - V|_2 / |V|_2 (absolute when V = 0).
double covariance_relative_error(const Matrix& c, const Matrix& v);

}  // namespace rtsa::montecarlo
