#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "rtsa/asymptotics.hpp"
#include "rtsa/errors.hpp"
#include "rtsa/proofcheck.hpp"
#include "rtsa/random.hpp"

namespace rtsa::proofcheck {
namespace {

constexpr std::size_t kRecheckEvery = 64;
constexpr double kDriftTolerance = 1e-8;

void require_stable(const Matrix& q, const char* context) {
  if (q.rows() != q.cols() || q.rows() == 0) throw std::invalid_argument("Q must be square");
  const auto lambda = asymptotics::leftmost_eigenvalue(q);
  if (!(lambda.real() > 0.0)) throw StabilityError(context, lambda);
}

}  // namespace

ExponentialFactors::ExponentialFactors(const Grid& grid, const Matrix& q, std::size_t horizon)
    : grid_(grid), q_(q) {
  require_stable(q_, "proofcheck: Q");
  grid_.extend(horizon);
  factors_.reserve(horizon);
  Matrix product = Matrix::Identity(q_.rows(), q_.cols());
  for (std::size_t k = 1; k <= horizon; ++k) {
    factors_.push_back(asymptotics::matrix_exp(-grid_.gain(k) * q_));
    product = (factors_.back() * product).eval();
    if (k % kRecheckEvery == 0 || k == horizon) {
      const Matrix direct = asymptotics::matrix_exp(-grid_.s(k) * q_);
      const double scale = direct.norm();
      if (scale == 0.0) break;  // underflowed; nothing left to compare
      const double drift = (product - direct).norm() / scale;
      max_drift_ = std::max(max_drift_, drift);
      if (drift > kDriftTolerance) {
        throw Error("proofcheck: propagator product drifted " + std::to_string(drift) +
                    " from exp(-Q s) at k = " + std::to_string(k));
      }
    }
  }
}

Vector weighted_sum(const Grid& grid, const Matrix& q, std::size_t t, std::span<const Vector> y) {
  if (y.size() < t + 1) throw std::invalid_argument("weighted_sum: need t + 1 values");
  for (std::size_t k = 0; k <= t; ++k) {
    if (y[k].size() != q.rows()) throw std::invalid_argument("weighted_sum: dimension mismatch");
    if (!y[k].allFinite()) throw std::invalid_argument("weighted_sum: non-finite y at k = " + std::to_string(k));
  }
  const ExponentialFactors factors(grid, q, t);
  return factors.accumulate(t, [&](std::size_t k, Vector& out) { out = y[k]; }, false);
}

Vector weighted_noise_sum(const Grid& grid, const Matrix& q, std::size_t t,
                          std::span<const Vector> dm, std::span<const std::uint8_t> active) {
  if (dm.size() < t + 1) throw std::invalid_argument("weighted_noise_sum: need t + 1 values");
  if (!active.empty() && active.size() < t + 1) {
    throw std::invalid_argument("weighted_noise_sum: mask shorter than t + 1");
  }
  for (std::size_t k = 0; k <= t; ++k) {
    if (dm[k].size() != q.rows()) throw std::invalid_argument("weighted_noise_sum: dimension mismatch");
    if (!dm[k].allFinite()) {
      throw std::invalid_argument("weighted_noise_sum: non-finite noise at k = " + std::to_string(k));
    }
  }
  const ExponentialFactors factors(grid, q, t);
  return factors.accumulate(
      t,
      [&](std::size_t k, Vector& out) {
        if (active.empty() || active[k]) out = dm[k];
        else out.setZero(q.rows());
      },
      true);
}

Matrix lemma3_variance(const Grid& grid, const Matrix& q, const Matrix& sigma,
                       const SeriesOptions& options) {
  require_stable(q, "lemma3_variance: Q");
  const Eigen::Index d = q.rows();
  if (sigma.rows() != d || sigma.cols() != d) throw std::invalid_argument("lemma3_variance: dimension mismatch");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("lemma3_variance: tolerance must be positive");

  Matrix sum = grid.gain(0) * sigma;  // k = 0: s_{n,0} = 0
  if (sigma.norm() == 0.0) return sum;
  Matrix propagator = Matrix::Identity(d, d);  // exp(-Q s_{n,k})
  double reference = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < options.max_terms; ++k) {
    propagator = (asymptotics::matrix_exp(-grid.gain(k) * q) * propagator).eval();
    const Matrix term = grid.gain(k) * propagator * sigma * propagator.transpose();
    sum += term;
    const double term_norm = term.norm();
    if (!std::isfinite(term_norm)) throw Error("lemma3_variance: non-finite term at k = " + std::to_string(k));
    if (term_norm < options.tolerance * sum.norm()) return 0.5 * (sum + sum.transpose());
    if (k % options.burn_in == 0) {
      if (term_norm >= reference) {
        throw Error("lemma3_variance: series terms stopped decreasing at k = " + std::to_string(k));
      }
      reference = term_norm;
    }
  }
  throw Error("lemma3_variance: no convergence within " + std::to_string(options.max_terms) + " terms");
}

namespace {

Vector replay(const ExponentialFactors& factors, std::size_t t, std::uint64_t seed,
              std::size_t r) {
  RandomStream rng(seed, r);
  return factors.accumulate(
      t,
      [&](std::size_t, Vector& out) {
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.normal();
      },
      true);
}

Matrix covariance_of(const std::vector<Vector>& samples) {
  const Eigen::Index d = samples.front().size();
  Vector mean = Vector::Zero(d);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& s : samples) cov += (s - mean) * (s - mean).transpose();
  return cov / static_cast<double>(samples.size() - 1);
}

}  // namespace

Matrix noise_sum_covariance_serial(const ExponentialFactors& factors, std::size_t t,
                                   std::size_t replays, std::uint64_t seed) {
  if (replays < 2) throw std::invalid_argument("noise_sum_covariance: need at least 2 replays");
  std::vector<Vector> samples(replays);
  for (std::size_t r = 0; r < replays; ++r) samples[r] = replay(factors, t, seed, r);
  return covariance_of(samples);
}

Matrix noise_sum_covariance(const ExponentialFactors& factors, std::size_t t,
                            std::size_t replays, std::uint64_t seed, int threads) {
  if (replays < 2) throw std::invalid_argument("noise_sum_covariance: need at least 2 replays");
  std::vector<Vector> samples(replays);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(replays);
#pragma omp parallel for schedule(static) num_threads(n_threads)
  for (std::int64_t r = 0; r < count; ++r) {
    samples[static_cast<std::size_t>(r)] = replay(factors, t, seed, static_cast<std::size_t>(r));
  }
  return covariance_of(samples);  // fixed reduction order
}

}  // namespace rtsa::proofcheck
