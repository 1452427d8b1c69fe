#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rtsa/problems.hpp"

namespace rtsa::problems {

const char* to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::scaled_by_state: return "scaled_by_state";
    case NoiseKind::heavy_tailed: return "heavy_tailed";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "scaled_by_state") return NoiseKind::scaled_by_state;
  if (name == "heavy_tailed") return NoiseKind::heavy_tailed;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

NoiseModel::NoiseModel(NoiseKind kind, const Matrix& sigma, double state_scale, double rho,
                       double tail_index)
    : kind_(kind), sigma_(sigma), state_scale_(state_scale), rho_(rho), tail_index_(tail_index) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() == 0) {
    throw std::invalid_argument("noise covariance must be square and non-empty");
  }
  if (!sigma_.allFinite() || (sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() >
                                 1e-12 * std::max(1.0, sigma_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("noise covariance must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma_);
  const double tol = 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("noise covariance is not positive semi-definite");
  }
  // Cholesky when possible; the symmetric square root handles singular Sigma.
  Eigen::LLT<Matrix> llt(sigma_);
  if (llt.info() == Eigen::Success) {
    chol_ = llt.matrixL();
  } else {
    chol_ = eig.eigenvectors() *
            eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
            eig.eigenvectors().transpose();
  }
  if (!(rho_ > 0.0)) throw std::invalid_argument("noise rho must be positive");
  if (state_scale_ < 0.0) throw std::invalid_argument("noise state_scale must be >= 0");
  if (kind_ == NoiseKind::heavy_tailed) {
    if (tail_index_ == 0.0) tail_index_ = 3.0 + rho_;
    if (!(tail_index_ > 2.0 + rho_)) {
      throw std::invalid_argument("heavy-tailed noise needs tail_index > 2 + rho");
    }
    pareto_unit_scale_ = std::sqrt((tail_index_ - 2.0) / tail_index_);
  }
}

void NoiseModel::sample(const Vector& x, const Vector& root, RandomStream& rng,
                        Vector& out) const {
  const Eigen::Index d = sigma_.rows();
  thread_local Vector xi;  // hot path: no allocation per draw
  xi.resize(d);
  if (kind_ == NoiseKind::heavy_tailed) {
    for (Eigen::Index i = 0; i < d; ++i) {
      // Pareto(x_m = 1, tail_index) by inversion; E[P^2] = k / (k - 2).
      const double pareto = std::pow(rng.uniform_open(), -1.0 / tail_index_);
      xi[i] = rng.sign() * pareto * pareto_unit_scale_;
    }
  } else {
    for (Eigen::Index i = 0; i < d; ++i) xi[i] = rng.normal();
  }
  out.noalias() = chol_ * xi;
  if (kind_ == NoiseKind::scaled_by_state) out *= 1.0 + state_scale_ * (x - root).norm();
}

std::string NoiseModel::moment_certificate() const {
  std::ostringstream out;
  switch (kind_) {
    case NoiseKind::gaussian:
      out << "gaussian increments: every moment finite, conditional covariance equals Sigma";
      break;
    case NoiseKind::scaled_by_state:
      out << "state-scaled gaussian: every moment finite on |x - x*| <= eta, "
             "conditional covariance -> Sigma at x*";
      break;
    case NoiseKind::heavy_tailed:
      out << "symmetrised Pareto, tail index " << tail_index_ << " > 2 + rho = " << 2.0 + rho_
          << ": (2 + rho)-moment finite, covariance equals Sigma";
      break;
  }
  return out.str();
}

}  // namespace rtsa::problems
