#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rtsa/asymptotics.hpp"
#include "rtsa/errors.hpp"

namespace rtsa::asymptotics {

Matrix matrix_exp(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exp: matrix is not square");
  if (!m.allFinite()) throw std::invalid_argument("matrix_exp: non-finite input");
  return m.exp();
}

std::complex<double> leftmost_eigenvalue(const Matrix& b) {
  const Eigen::VectorXcd eig = Eigen::EigenSolver<Matrix>(b, false).eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < eig.size(); ++i)
    if (eig[i].real() < eig[best].real()) best = i;
  return eig[best];
}

Matrix solve_lyapunov(const Matrix& b, const Matrix& c) {
  const Eigen::Index d = b.rows();
  if (b.cols() != d || c.rows() != d || c.cols() != d) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  if (!b.allFinite() || !c.allFinite()) throw std::invalid_argument("solve_lyapunov: non-finite input");
  const std::complex<double> lambda = leftmost_eigenvalue(b);
  if (!(lambda.real() > 0.0)) throw StabilityError("solve_lyapunov", lambda);

  const Matrix id = Matrix::Identity(d, d);
  const Matrix op = Eigen::kroneckerProduct(id, b) + Eigen::kroneckerProduct(b, id);
  const Vector rhs = Eigen::Map<const Vector>(c.data(), d * d);
  const Vector sol = op.fullPivLu().solve(rhs);
  Matrix x = Eigen::Map<const Matrix>(sol.data(), d, d);
  if (c.isApprox(c.transpose(), 0.0)) x = 0.5 * (x + x.transpose()).eval();
  return x;
}

double lyapunov_residual(const Matrix& b, const Matrix& x, const Matrix& c) {
  const double scale = c.norm();
  const double res = (b * x + x * b.transpose() - c).norm();
  return scale > 0.0 ? res / scale : res;
}

}  // namespace rtsa::asymptotics
