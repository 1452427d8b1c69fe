#include <algorithm>
#include <cmath>

#include <omp.h>

#include "rtsa/errors.hpp"
#include "rtsa/hypotheses.hpp"
#include "rtsa/montecarlo.hpp"
#include "rtsa/truncated_iterator.hpp"

namespace rtsa::montecarlo {

const char* to_string(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::robbins_monro ? "robbins_monro" : "truncated";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "truncated") return Algorithm::truncated;
  if (name == "robbins_monro") return Algorithm::robbins_monro;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

void validate(const EnsembleConfig& config) {
  if (config.replicates < 2) throw ConfigError("replicates", "must be >= 2");
  if (config.n_steps < 1) throw ConfigError("n_steps", "must be >= 1");
  if (!std::is_sorted(config.checkpoints.begin(), config.checkpoints.end())) {
    throw ConfigError("checkpoints", "must be sorted");
  }
  if (std::adjacent_find(config.checkpoints.begin(), config.checkpoints.end()) !=
      config.checkpoints.end()) {
    throw ConfigError("checkpoints", "must not repeat");
  }
  if (!config.checkpoints.empty() && config.checkpoints.back() > config.n_steps) {
    throw ConfigError("checkpoints", "must not exceed n_steps");
  }
  if (!config.x0.empty() && config.x0.size() != static_cast<std::size_t>(config.problem.dim)) {
    throw ConfigError("x0", "expected " + std::to_string(config.problem.dim) + " coordinates");
  }
  if (config.eta < 0.0) throw ConfigError("eta", "must be >= 0");
}

ReplicateOutcome simulate_replicate(const problems::Problem& problem,
                                    const GainSchedule& schedule, const CompactFamily& family,
                                    const Vector& x0, StepIndex n_steps,
                                    std::span<const StepIndex> checkpoints, Algorithm algorithm,
                                    std::uint64_t base_seed, std::uint64_t replicate, double eta,
                                    StepIndex window_start) {
  ReplicateOutcome out;
  out.deltas.reserve(checkpoints.size());
  out.in_window.reserve(checkpoints.size());
  RandomStream rng(base_seed, replicate);
  const Vector& root = problem.root();
  TruncatedState state = TruncatedState::start(x0);
  StepRecord record;
  Vector u(problem.dim()), dm(problem.dim());
  bool stayed = true;
  std::size_t next = 0;

  auto observe = [&]() {
    if (state.n >= window_start && (state.x - root).norm() > eta) stayed = false;
    while (next < checkpoints.size() && checkpoints[next] == state.n) {
      out.deltas.push_back((state.x - root) / std::sqrt(schedule.gain(state.n)));
      const bool window = state.n >= window_start ? stayed : (state.x - root).norm() <= eta;
      out.in_window.push_back(window ? 1 : 0);
      ++next;
    }
  };

  observe();
  for (StepIndex k = 0; k < n_steps; ++k) {
    problem.drift(state.x, u);
    problem.noise(state.x, rng, dm);
    if (algorithm == Algorithm::truncated) {
      try {
        advance_truncated(state, record, schedule, family, u, dm);
      } catch (const NonFiniteError&) {
        out.diverged = true;
        out.divergence_step = k;
        break;
      }
      if (record.truncated) out.last_truncation = k;
    } else {
      state.x -= schedule.gain(k + 1) * (u + dm);
      ++state.n;
      if (!state.x.allFinite() || !u.allFinite() || !dm.allFinite()) {
        out.diverged = true;
        out.divergence_step = k;
        break;
      }
    }
    observe();
  }
  out.final_sigma = state.sigma;
  return out;
}

namespace {

struct Prepared {
  problems::Problem problem;
  GainSchedule schedule;
  CompactFamily family;
  Vector x0;
  std::vector<StepIndex> checkpoints;
  asymptotics::LimitCovariance theory;
  double mu_hat;
  double eta;
  StepIndex window_start;
};

Prepared prepare(const EnsembleConfig& config) {
  validate(config);
  problems::Problem problem = problems::builtin(config.problem);
  // Theory first: an H5 violation must surface before any simulation.
  asymptotics::LimitCovariance theory =
      asymptotics::limit_covariance(problem.jacobian_at_root(), problem.noise_cov_at_root(),
                                    config.schedule);
  CompactFamily family = make_family(config.family, problem.root());
  Vector x0 = Vector::Zero(problem.dim());
  if (!config.x0.empty()) x0 = Eigen::Map<const Vector>(config.x0.data(), problem.dim());
  std::vector<StepIndex> checkpoints = config.checkpoints;
  if (checkpoints.empty()) checkpoints.push_back(config.n_steps);
  const double mu_hat = problems::boundary_margin(family, problem.root());
  const double eta = config.eta > 0.0 ? config.eta : problems::default_eta(mu_hat);
  const StepIndex window_start = config.window_start > 0 ? config.window_start : checkpoints.front();
  return {std::move(problem), config.schedule, std::move(family), std::move(x0),
          std::move(checkpoints), std::move(theory), mu_hat, eta, window_start};
}

ReplicateOutcome simulate(const Prepared& p, const EnsembleConfig& config, std::size_t r) {
  return simulate_replicate(p.problem, p.schedule, p.family, p.x0, config.n_steps, p.checkpoints,
                            config.algorithm, config.base_seed, r, p.eta, p.window_start);
}

bool positive_definite(const Matrix& v) {
  if (v.norm() == 0.0) return false;
  return Eigen::LLT<Matrix>(0.5 * (v + v.transpose())).info() == Eigen::Success;
}

EnsembleResult summarise(const Prepared& p, const EnsembleConfig& config,
                         std::vector<ReplicateOutcome> outcomes) {
  EnsembleResult result;
  EnsembleSummary& summary = result.summary;
  summary.theory = p.theory;
  summary.replicates = outcomes.size();
  summary.mu_hat = p.mu_hat;
  summary.eta = p.eta;
  summary.truncation = truncation_stats(outcomes, config.n_steps);
  for (const auto& o : outcomes)
    if (o.diverged) ++summary.divergence_count;

  const Eigen::Index d = p.problem.dim();
  const bool v_pd = positive_definite(p.theory.v);
  for (std::size_t c = 0; c < p.checkpoints.size(); ++c) {
    CheckpointSummary cs;
    cs.n = p.checkpoints[c];
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < outcomes.size(); ++r)
      if (!outcomes[r].diverged) rows.push_back(r);
    cs.samples = rows.size();
    Matrix samples(static_cast<Eigen::Index>(rows.size()), d);
    double restricted = 0.0;
    std::size_t in_window = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ReplicateOutcome& o = outcomes[rows[i]];
      samples.row(static_cast<Eigen::Index>(i)) = o.deltas[c].transpose();
      if (o.in_window[c]) {
        restricted += o.deltas[c].squaredNorm();
        ++in_window;
      }
    }
    if (!rows.empty()) {
      cs.mean = samples.colwise().mean().transpose();
      cs.restricted_second_moment = restricted / static_cast<double>(rows.size());
      cs.window_fraction = static_cast<double>(in_window) / static_cast<double>(rows.size());
    } else {
      cs.mean = Vector::Constant(d, std::nan(""));
    }
    if (rows.size() >= 2) {
      const Matrix centered = samples.rowwise() - cs.mean.transpose();
      cs.covariance = centered.transpose() * centered / static_cast<double>(rows.size() - 1);
      cs.cov_rel_err = covariance_relative_error(cs.covariance, p.theory.v);
    } else {
      cs.covariance = Matrix::Constant(d, d, std::nan(""));
      cs.cov_rel_err = std::nan("");
    }
    if (v_pd && rows.size() >= 100) cs.normality = normality_report(samples, p.theory.v);
    summary.checkpoints.push_back(std::move(cs));
  }
  result.checkpoints = p.checkpoints;
  result.outcomes = std::move(outcomes);
  return result;
}

}  // namespace

EnsembleResult run_ensemble_serial(const EnsembleConfig& config) {
  const Prepared p = prepare(config);
  std::vector<ReplicateOutcome> outcomes(config.replicates);
  for (std::size_t r = 0; r < config.replicates; ++r) outcomes[r] = simulate(p, config, r);
  return summarise(p, config, std::move(outcomes));
}

EnsembleResult run_ensemble(const EnsembleConfig& config, int threads) {
  const Prepared p = prepare(config);
  std::vector<ReplicateOutcome> outcomes(config.replicates);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(config.replicates);
#pragma omp parallel for schedule(dynamic, 16) num_threads(n_threads)
  for (std::int64_t r = 0; r < count; ++r) {
    outcomes[static_cast<std::size_t>(r)] = simulate(p, config, static_cast<std::size_t>(r));
  }
  return summarise(p, config, std::move(outcomes));
}

TruncationStats truncation_stats(std::span<const ReplicateOutcome> outcomes, StepIndex n_steps) {
  TruncationStats stats;
  stats.replicates = outcomes.size();
  std::size_t zero = 0, stabilized = 0;
  for (const auto& o : outcomes) {
    ++stats.histogram[o.final_sigma];
    stats.max_sigma = std::max(stats.max_sigma, o.final_sigma);
    if (o.final_sigma == 0) ++zero;
    // The final half is steps [n_steps / 2, n_steps).
    if (!o.last_truncation || 2 * *o.last_truncation < n_steps) ++stabilized;
  }
  if (!outcomes.empty()) {
    stats.fraction_zero = static_cast<double>(zero) / static_cast<double>(outcomes.size());
    stats.fraction_stabilized = static_cast<double>(stabilized) / static_cast<double>(outcomes.size());
  }
  return stats;
}

}  // namespace rtsa::montecarlo
