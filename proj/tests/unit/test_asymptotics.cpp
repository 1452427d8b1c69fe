#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rtsa/asymptotics.hpp"
#include "rtsa/errors.hpp"

using namespace rtsa;
using namespace rtsa::asymptotics;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

Matrix m1(double x) { return Matrix::Constant(1, 1, x); }

}  // namespace

TEST(MatrixExp, Examples) {
  EXPECT_EQ(matrix_exp(Matrix::Zero(3, 3)), Matrix::Identity(3, 3));
  const Matrix e = matrix_exp(diag({1.0, 2.0}));
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-12 * std::exp(1.0));
  EXPECT_NEAR(e(1, 1), std::exp(2.0), 1e-12 * std::exp(2.0));
  EXPECT_EQ(e(0, 1), 0.0);
  Matrix n(2, 2);
  n << 0, 1, 0, 0;
  Matrix expected(2, 2);
  expected << 1, 1, 0, 1;
  EXPECT_LE((matrix_exp(n) - expected).norm(), 1e-15);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(matrix_exp(bad), std::invalid_argument);
}

TEST(MatrixExp, InverseProperty) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 6;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = n01(gen);
    m *= (5.0 * (trial + 1) / 200.0) / m.norm();  // |M|_F <= 5
    EXPECT_LE((matrix_exp(m) * matrix_exp(-m) - Matrix::Identity(d, d)).norm(), 1e-10);
  }
}

TEST(SolveLyapunov, Examples) {
  EXPECT_LE((solve_lyapunov(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) -
             0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
  Matrix expected(2, 2);
  expected << 0.5, 0.25, 0.25, 1.0 / 6.0;
  EXPECT_LE((solve_lyapunov(diag({1.0, 3.0}), Matrix::Ones(2, 2)) - expected).norm(), 1e-15);
}

TEST(SolveLyapunov, RandomInstancesAgainstQuadrature) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 4 + (trial > 8 ? 2 : 0);
    const Matrix b = oracle::random_stable(gen, d, trial % 2 == 0);
    const Matrix c = oracle::random_psd(gen, d);
    const Matrix x = solve_lyapunov(b, c);
    EXPECT_LE(lyapunov_residual(b, x, c), 1e-10);
    EXPECT_LE((x - x.transpose()).norm(), 1e-12 * x.norm());
    const Matrix q = oracle::lyapunov_quadrature(b, c);
    EXPECT_LE((x - q).norm(), 1e-6 * x.norm()) << "d=" << d;
  }
}

TEST(SolveLyapunov, RejectsUnstable) {
  Matrix b(2, 2);
  b << 1, 0, 0, -0.25;
  try {
    solve_lyapunov(b, Matrix::Identity(2, 2));
    FAIL();
  } catch (const StabilityError& e) {
    EXPECT_DOUBLE_EQ(e.eigenvalue().real(), -0.25);
    EXPECT_NE(std::string(e.what()).find("-0.25"), std::string::npos);
  }
  EXPECT_THROW(solve_lyapunov(Matrix::Zero(1, 1), m1(1.0)), StabilityError);
}

TEST(LimitCovariance, ScalarSlowRegime) {
  const auto lc = limit_covariance(m1(1.0), m1(1.0), GainSchedule(1.0, 0.7));
  EXPECT_NEAR(lc.v(0, 0), 0.5, 1e-15);
  EXPECT_EQ(lc.regime, Regime::alpha_lt_1);
  EXPECT_EQ(lc.q(0, 0), 1.0);
  // gamma does not enter below alpha = 1
  EXPECT_NEAR(limit_covariance(m1(1.0), m1(1.0), GainSchedule(7.0, 0.7)).v(0, 0), 0.5, 1e-15);
}

TEST(LimitCovariance, ScalarCriticalRegime) {
  const auto lc = limit_covariance(m1(1.0), m1(1.0), GainSchedule(1.0, 1.0));
  EXPECT_NEAR(lc.v(0, 0), 1.0, 1e-14);
  EXPECT_EQ(lc.regime, Regime::alpha_eq_1);
  EXPECT_NEAR(lc.q(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(lc.h5_min_eigenvalue, 0.5, 1e-15);
}

// Delta_n is scaled by sqrt(gamma_n), so the limit is gamma sigma^2 / (2 gamma a - 1);
// at gamma = 1 this coincides with gamma^2 sigma^2 / (2 gamma a - 1).
TEST(LimitCovariance, CriticalRegimeScalesWithGamma) {
  EXPECT_NEAR(limit_covariance(m1(2.0), m1(1.0), GainSchedule(0.3, 1.0)).v(0, 0), 1.5, 1e-13);
  EXPECT_NEAR(limit_covariance(m1(2.0), m1(1.0), GainSchedule(1.0, 1.0)).v(0, 0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(limit_covariance(m1(0.6), m1(1.0), GainSchedule(1.0, 1.0)).v(0, 0), 5.0, 1e-12);
  EXPECT_NEAR(limit_covariance(m1(1.0), m1(2.0), GainSchedule(4.0, 1.0)).v(0, 0), 8.0 / 7.0, 1e-13);
}

TEST(LimitCovariance, DiagonalCriticalAgainstQuadrature) {
  const Matrix a = diag({1.0, 2.0});
  const auto lc = limit_covariance(a, Matrix::Identity(2, 2), GainSchedule(1.0, 1.0));
  EXPECT_LE((lc.v - diag({1.0, 1.0 / 3.0})).norm(), 1e-14);
  // gamma int_0^inf e^{(I/2 - gamma A) t} Sigma e^{(I/2 - gamma A)' t} dt
  const Matrix q = oracle::lyapunov_quadrature(a - 0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  EXPECT_LE((lc.v - q).norm(), 1e-6);
}

TEST(LimitCovariance, RandomInstancesAgainstIntegral) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 6;
    const Matrix sym = oracle::random_psd(gen, d) + 0.6 * Matrix::Identity(d, d);
    std::normal_distribution<double> n01;
    Matrix k(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) k(i, j) = n01(gen);
    const Matrix a = sym + 0.5 * (k - k.transpose());
    const Matrix sigma = oracle::random_psd(gen, d) + 0.1 * Matrix::Identity(d, d);
    const bool critical = trial % 2;
    const double gamma = 1.5;
    const auto lc = limit_covariance(a, sigma, GainSchedule(gamma, critical ? 1.0 : 0.8));
    const Matrix ref = critical
        ? Matrix(gamma * oracle::lyapunov_quadrature(gamma * a - 0.5 * Matrix::Identity(d, d), sigma))
        : oracle::lyapunov_quadrature(a, sigma);
    EXPECT_LE((lc.v - ref).norm(), 1e-6 * ref.norm()) << trial;
    EXPECT_LE((lc.v - lc.v.transpose()).norm(), 1e-12 * lc.v.norm());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(lc.v).eigenvalues().minCoeff(), -1e-12);
    EXPECT_LE(lyapunov_residual(lc.q, lc.v, sigma), 1e-10);
  }
}

TEST(LimitCovariance, H5ViolationNamesEigenvalue) {
  try {
    limit_covariance(m1(1.0), m1(1.0), GainSchedule(0.4, 1.0));
    FAIL();
  } catch (const H5Violation& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -0.1, 1e-15);
    EXPECT_NE(std::string(e.what()).find("-0.1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("is positive definite"), std::string::npos);
  }
  // boundary gamma a = 1/2 is rejected too
  EXPECT_THROW(limit_covariance(m1(1.0), m1(1.0), GainSchedule(0.5, 1.0)), H5Violation);
  Matrix bad(2, 2);
  bad << 1, 0, 0, -1;
  EXPECT_THROW(limit_covariance(bad, Matrix::Identity(2, 2), GainSchedule(1.0, 0.7)), StabilityError);
}
