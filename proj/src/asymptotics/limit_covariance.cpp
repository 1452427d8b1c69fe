#include <Eigen/Eigenvalues>

#include "rtsa/asymptotics.hpp"
#include "rtsa/errors.hpp"

namespace rtsa::asymptotics {

LimitCovariance limit_covariance(const Matrix& a, const Matrix& sigma,
                                 const GainSchedule& schedule) {
  const Eigen::Index d = a.rows();
  if (a.cols() != d || sigma.rows() != d || sigma.cols() != d) {
    throw std::invalid_argument("limit_covariance: dimension mismatch");
  }
  const Matrix id = Matrix::Identity(d, d);
  LimitCovariance out;
  out.regime = schedule.regime();
  const Matrix shifted = schedule.gamma() * a - 0.5 * id;
  out.h5_min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (shifted + shifted.transpose()),
                                            Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();

  if (out.regime == Regime::alpha_eq_1) {
    if (!(out.h5_min_eigenvalue > 0.0)) throw H5Violation(out.h5_min_eigenvalue);
    out.q = a - id / (2.0 * schedule.gamma());
  } else {
    const Matrix sym = 0.5 * (a + a.transpose());
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (!(min_eig > 0.0)) throw StabilityError("limit_covariance: symmetric part of A", min_eig);
    out.q = a;
  }
  out.v = solve_lyapunov(out.q, sigma);
  return out;
}

}  // namespace rtsa::asymptotics
