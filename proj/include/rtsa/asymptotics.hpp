#pragma once

#include <complex>

#include "rtsa/gain_schedule.hpp"
#include "rtsa/types.hpp"

namespace rtsa::asymptotics {

/// e^M. Padé scaling-and-squaring (Eigen MatrixFunctions).
/// Throws std::invalid_argument on non-finite input.
Matrix matrix_exp(const Matrix& m);

/// Eigenvalue of `b` with the smallest real part.
std::complex<double> leftmost_eigenvalue(const Matrix& b);

/// Solves B X + X B' = C by the Kronecker-vectorised linear system
/// (I (x) B + B (x) I) vec X = vec C. O(d^6); intended for d <= 32.
///
/// Requires every eigenvalue of B to have positive real part (throws
/// StabilityError naming the offending eigenvalue). The result is
/// symmetrised when C is symmetric; for such B it equals
/// the integral of e^{-Bt} C e^{-B't} over [0, inf).
Matrix solve_lyapunov(const Matrix& b, const Matrix& c);

/// Relative residual |B X + X B' - C| / |C| (Frobenius norm; |C| = 0 -> absolute).
double lyapunov_residual(const Matrix& b, const Matrix& x, const Matrix& c);

struct LimitCovariance {
  Matrix v;
  Regime regime = Regime::alpha_lt_1;
  /// Drift matrix of the linearised error dynamics: A when alpha < 1,
  /// A - I / (2 gamma) when alpha = 1. V solves Q V + V Q' = Sigma.
  Matrix q;
  /// Smallest eigenvalue of sym(gamma A - I/2); meaningful for alpha = 1.
  double h5_min_eigenvalue = 0.0;
};

/// Asymptotic covariance of Delta_n = (X_n - x*) / sqrt(gamma_n).
///
/// alpha < 1: V = int_0^inf e^{-At} Sigma e^{-A't} dt, i.e. A V + V A' = Sigma.
/// alpha = 1: V = gamma int_0^inf e^{(I/2 - gamma A)t} Sigma e^{(I/2 - gamma A)'t} dt,
///            i.e. (gamma A - I/2) V + V (gamma A - I/2)' = gamma Sigma.
///
/// Throws H5Violation (alpha = 1 with sym(gamma A - I/2) not PD) or
/// StabilityError (alpha < 1 with sym(A) not PD).
LimitCovariance limit_covariance(const Matrix& a, const Matrix& sigma,
                                 const GainSchedule& schedule);

}  // namespace rtsa::asymptotics
