#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rtsa/stochastic_model.hpp"
#include "rtsa/types.hpp"

namespace rtsa::problems {

/// Mean field u. Extension point: derive from this to add a drift beyond the
/// built-in zoo; the remainder y(.) of the first-order expansion at the root
/// is implicit in how evaluate() departs from jacobian_at_root.
class DriftField {
 public:
  virtual ~DriftField() = default;
  virtual void evaluate(const Vector& x, Vector& out) const = 0;
};

enum class NoiseKind { gaussian, scaled_by_state, heavy_tailed };

const char* to_string(NoiseKind kind) noexcept;
NoiseKind noise_kind_from_string(const std::string& name);

/// Martingale-increment generator dM = s(x) * L * xi with L L' = Sigma.
///
/// gaussian:        xi ~ N(0, I), s = 1
/// scaled_by_state: xi ~ N(0, I), s = 1 + state_scale * |x - x*|
/// heavy_tailed:    xi_i iid symmetrised Pareto with tail index
///                  `tail_index`, rescaled to unit variance, s = 1
///
/// The heavy-tailed kind has finite moments of every order below
/// tail_index; its default tail index 3 + rho leaves the (2 + rho)-moment
/// finite.
class NoiseModel {
 public:
  NoiseModel(NoiseKind kind, const Matrix& sigma, double state_scale = 0.0,
             double rho = 0.5, double tail_index = 0.0);

  NoiseKind kind() const noexcept { return kind_; }
  const Matrix& covariance_at_root() const noexcept { return sigma_; }
  double rho() const noexcept { return rho_; }
  double tail_index() const noexcept { return tail_index_; }
  double state_scale() const noexcept { return state_scale_; }

  void sample(const Vector& x, const Vector& root, RandomStream& rng, Vector& out) const;

  /// Human-readable statement of which moments are finite by construction.
  std::string moment_certificate() const;

 private:
  NoiseKind kind_;
  Matrix sigma_;
  Matrix chol_;
  double state_scale_;
  double rho_;
  double tail_index_;
  double pareto_unit_scale_ = 1.0;
};

/// u with known root x*, Jacobian A = Du(x*), and oracle U(x, Z) = u(x) + dM.
class Problem final : public StochasticModel {
 public:
  Problem(std::string name, Vector root, Matrix jacobian_at_root,
          std::shared_ptr<const DriftField> drift, NoiseModel noise);

  const std::string& name() const noexcept { return name_; }
  Eigen::Index dim() const override { return root_.size(); }
  const Vector& root() const noexcept { return root_; }
  const Matrix& jacobian_at_root() const noexcept { return jacobian_; }
  const Matrix& noise_cov_at_root() const noexcept { return noise_.covariance_at_root(); }
  const NoiseModel& noise_model() const noexcept { return noise_; }

  void drift(const Vector& x, Vector& out) const override { drift_->evaluate(x, out); }
  Vector drift(const Vector& x) const;
  void noise(const Vector& x, RandomStream& rng, Vector& out) const override {
    noise_.sample(x, root_, rng, out);
  }
  /// One draw of U(x, Z).
  Vector oracle(const Vector& x, RandomStream& rng) const;

 private:
  std::string name_;
  Vector root_;
  Matrix jacobian_;
  std::shared_ptr<const DriftField> drift_;
  NoiseModel noise_;
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  std::vector<double> covariance;  // row-major d x d; empty means identity
  double state_scale = 0.0;
  double rho = 0.5;
  double tail_index = 0.0;  // 0 selects 3 + rho

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Parameters of a built-in problem. Which fields matter depends on `name`:
///   linear    dim, root, matrix (A, row-major; empty means identity)
///   cubic     dim, root
///   logistic  c (root ln c; dim must be 1)
///   rotation  a, b, root (dim must be 2)
struct ProblemSpec {
  std::string name = "linear";
  int dim = 1;
  std::vector<double> root;  // empty means the origin
  std::vector<double> matrix;
  double c = 1.0;
  double a = 1.0;
  double b = 0.0;
  NoiseSpec noise;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

const std::vector<std::string>& builtin_names();

/// Throws std::invalid_argument for unknown names and invalid parameters
/// (dimension mismatch, Jacobian whose symmetric part is not positive
/// definite, c <= 0, a <= 0, non-PSD noise covariance).
Problem builtin(const ProblemSpec& spec);

/// Central finite-difference Jacobian of the drift.
Matrix finite_difference_jacobian(const Problem& problem, const Vector& x, double h = 1e-5);

}  // namespace rtsa::problems
