#include <cmath>

#include <gtest/gtest.h>

#include "rtsa/compact_family.hpp"
#include "rtsa/hypotheses.hpp"
#include "rtsa/problems.hpp"
#include "rtsa/random.hpp"
#include "rtsa/stats.hpp"

using namespace rtsa;
using namespace rtsa::problems;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

ProblemSpec linear(int dim, std::vector<double> matrix = {}) {
  ProblemSpec s;
  s.dim = dim;
  s.matrix = std::move(matrix);
  return s;
}

// Gaussian likelihood-ratio test of H0: Cov = sigma (mean known to be 0).
// n [tr(sigma^-1 S) - log det(sigma^-1 S) - d] ~ chi^2_{d(d+1)/2}.
double covariance_p_value(const std::vector<Vector>& draws, const Matrix& sigma) {
  const Eigen::Index d = sigma.rows();
  Matrix s = Matrix::Zero(d, d);
  for (const auto& x : draws) s += x * x.transpose();
  const double n = static_cast<double>(draws.size());
  s /= n;
  const Matrix m = sigma.ldlt().solve(s);
  const double stat = n * (m.trace() - std::log(m.determinant()) - static_cast<double>(d));
  return 1.0 - stats::chi_squared_cdf(stat, static_cast<double>(d * (d + 1) / 2));
}

}  // namespace

TEST(Builtin, LinearExample) {
  const Problem p = builtin(linear(1));
  EXPECT_EQ(p.drift(v1(1.0))[0], 1.0);
  EXPECT_EQ(p.jacobian_at_root(), Matrix::Identity(1, 1));
  EXPECT_EQ(p.noise_cov_at_root(), Matrix::Identity(1, 1));
}

TEST(Builtin, CubicExample) {
  ProblemSpec s;
  s.name = "cubic";
  const Problem p = builtin(s);
  EXPECT_EQ(p.drift(v1(2.0))[0], 10.0);
  EXPECT_EQ(p.jacobian_at_root(), Matrix::Identity(1, 1));
}

TEST(Builtin, LogisticExample) {
  ProblemSpec s;
  s.name = "logistic";
  s.c = 1.0;
  const Problem p = builtin(s);
  EXPECT_EQ(p.root()[0], 0.0);
  EXPECT_EQ(p.drift(v1(0.0))[0], 0.0);
  s.c = 3.0;
  const Problem q = builtin(s);
  EXPECT_DOUBLE_EQ(q.root()[0], std::log(3.0));
  EXPECT_DOUBLE_EQ(q.jacobian_at_root()(0, 0), 3.0);
}

TEST(Builtin, Rotation) {
  ProblemSpec s;
  s.name = "rotation";
  s.dim = 2;
  s.a = 0.5;
  s.b = 3.0;
  const Problem p = builtin(s);
  Matrix a(2, 2);
  a << 0.5, 3.0, -3.0, 0.5;
  EXPECT_EQ(p.jacobian_at_root(), a);
  s.a = 0.0;
  EXPECT_THROW(builtin(s), std::invalid_argument);
}

TEST(Builtin, RejectsBadParameters) {
  ProblemSpec s;
  s.name = "quartic";
  EXPECT_THROW(builtin(s), std::invalid_argument);
  EXPECT_THROW(builtin(linear(2, {1, 0, 0, -1})), std::invalid_argument);  // sym part not PD
  EXPECT_THROW(builtin(linear(2, {1, 0, 0})), std::invalid_argument);
  ProblemSpec n = linear(2);
  n.noise.covariance = {1, 2, 2, 1};  // indefinite
  EXPECT_THROW(builtin(n), std::invalid_argument);
  ProblemSpec l;
  l.name = "logistic";
  l.c = -1.0;
  EXPECT_THROW(builtin(l), std::invalid_argument);
}

TEST(Builtin, RootAndJacobianMatchFiniteDifferences) {
  std::vector<ProblemSpec> specs;
  specs.push_back(linear(3, {2, 1, 0, -1, 3, 0.5, 0, 0, 1}));
  specs.back().root = {1, -2, 0.5};
  ProblemSpec cubic;
  cubic.name = "cubic";
  cubic.dim = 2;
  cubic.root = {0.3, -0.7};
  specs.push_back(cubic);
  ProblemSpec logistic;
  logistic.name = "logistic";
  logistic.c = 2.5;
  specs.push_back(logistic);
  ProblemSpec rot;
  rot.name = "rotation";
  rot.dim = 2;
  rot.a = 1.5;
  rot.b = -0.4;
  rot.root = {1, 1};
  specs.push_back(rot);
  for (const auto& s : specs) {
    const Problem p = builtin(s);
    EXPECT_LE(p.drift(p.root()).norm(), 1e-12) << s.name;
    const Matrix fd = finite_difference_jacobian(p, p.root(), 1e-5);
    EXPECT_LE((fd - p.jacobian_at_root()).norm(), 1e-5 * p.jacobian_at_root().norm()) << s.name;
  }
}

TEST(Builtin, CubicMonotoneOnSamples) {
  ProblemSpec s;
  s.name = "cubic";
  s.dim = 3;
  const Problem p = builtin(s);
  RandomStream rng(8, 0);
  for (int i = 0; i < 10000; ++i) {
    Vector x(3);
    for (int k = 0; k < 3; ++k) x[k] = 5.0 * rng.normal();
    const double n2 = x.squaredNorm();
    EXPECT_NEAR(x.dot(p.drift(x)), n2 + n2 * n2, 1e-9 * (n2 + n2 * n2));
    EXPECT_GT(x.dot(p.drift(x)), 0.0);
  }
}

TEST(NoiseModel, OracleIsUnbiasedWithPrescribedCovariance) {
  ProblemSpec s = linear(2);
  s.noise.covariance = {2.0, 0.6, 0.6, 1.0};
  const Problem p = builtin(s);
  Vector x(2);
  x << 0.7, -1.2;
  RandomStream rng(31, 0);
  std::vector<Vector> draws;
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < 100000; ++i) {
    draws.push_back(p.oracle(x, rng) - p.drift(x));
    mean += draws.back();
  }
  mean /= 1e5;
  EXPECT_LT(mean.norm(), 4.0 * std::sqrt(3.0 / 1e5));
  EXPECT_GT(covariance_p_value(draws, p.noise_cov_at_root()), 1e-3);
  // The same test must reject a wrong covariance.
  EXPECT_LT(covariance_p_value(draws, 1.1 * p.noise_cov_at_root()), 1e-6);
}

TEST(NoiseModel, ScaledByStateInflatesAwayFromRoot) {
  ProblemSpec s = linear(1);
  s.noise.kind = NoiseKind::scaled_by_state;
  s.noise.state_scale = 0.5;
  const Problem p = builtin(s);
  RandomStream rng(4, 0);
  std::vector<Vector> at_root, away;
  Vector dm(1);
  for (int i = 0; i < 100000; ++i) {
    p.noise(v1(0.0), rng, dm);
    at_root.push_back(dm);
    p.noise(v1(2.0), rng, dm);
    away.push_back(dm);
  }
  EXPECT_GT(covariance_p_value(at_root, Matrix::Identity(1, 1)), 1e-3);
  EXPECT_GT(covariance_p_value(away, Matrix::Constant(1, 1, 4.0)), 1e-3);  // (1 + 0.5*2)^2
}

TEST(NoiseModel, HeavyTailedHasUnitCovarianceAndCertificate) {
  NoiseModel m(NoiseKind::heavy_tailed, Matrix::Identity(1, 1), 0.0, 0.5, 6.0);
  RandomStream rng(12, 0);
  double sum = 0.0, sum2 = 0.0;
  Vector dm(1);
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    m.sample(v1(0.0), v1(0.0), rng, dm);
    sum += dm[0];
    sum2 += dm[0] * dm[0];
  }
  EXPECT_LT(std::abs(sum / n), 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.03);
  NoiseModel def(NoiseKind::heavy_tailed, Matrix::Identity(1, 1));
  EXPECT_DOUBLE_EQ(def.tail_index(), 3.5);
  EXPECT_NE(def.moment_certificate().find("Pareto"), std::string::npos);
  EXPECT_THROW(NoiseModel(NoiseKind::heavy_tailed, Matrix::Identity(1, 1), 0.0, 0.5, 2.4),
               std::invalid_argument);
}

TEST(Hypotheses, H5HoldsForIdentity) {
  const Problem p = builtin(linear(2));
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(1.0, 1.0), family, 0.5);
  const auto& h5 = report.get("H5");
  EXPECT_EQ(h5.verdict, Verdict::holds);
  EXPECT_DOUBLE_EQ(*h5.value, 0.5);
  EXPECT_TRUE(report.all_hold());
}

TEST(Hypotheses, H5FailsForSmallGamma) {
  const Problem p = builtin(linear(1));
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(0.4, 1.0), family, 0.5);
  const auto& h5 = report.get("H5");
  EXPECT_EQ(h5.verdict, Verdict::fails);
  EXPECT_NEAR(*h5.value, -0.1, 1e-15);
  EXPECT_FALSE(report.all_hold());
  EXPECT_NEAR(h5_min_eigenvalue(Matrix::Identity(1, 1), 0.4), -0.1, 1e-15);
}

TEST(Hypotheses, H5NotApplicableBelowOne) {
  const Problem p = builtin(linear(1));
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(0.4, 0.7), family, 0.5);
  EXPECT_EQ(report.get("H5").verdict, Verdict::not_applicable);
  EXPECT_TRUE(report.all_hold());
}

TEST(Hypotheses, H4MarginForCentredBalls) {
  const Problem p = builtin(linear(2));
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  EXPECT_DOUBLE_EQ(boundary_margin(family, p.root()), 1.0);
  const auto report = check_hypotheses(p, GainSchedule(1.0, 0.7), family, 0.5);
  EXPECT_EQ(report.get("H4").verdict, Verdict::holds);
  EXPECT_DOUBLE_EQ(report.mu_hat, 1.0);
  EXPECT_DOUBLE_EQ(default_eta(1.0), 0.5);
  EXPECT_DOUBLE_EQ(default_eta(4.0), 1.0);
}

TEST(Hypotheses, H4MarginWhenRootStartsOutsideK0) {
  // Root at distance 3 from the centre: K_0, K_1 miss it; from K_2 on the
  // margin is r_j - 3, smallest at j = 2.
  ProblemSpec s = linear(1);
  s.root = {3.0};
  const Problem p = builtin(s);
  const auto family = CompactFamily::balls(v1(0.0), 1.0, 2.0);
  EXPECT_DOUBLE_EQ(boundary_margin(family, p.root()), 1.0);
}

TEST(Hypotheses, WeakRotationStillSatisfiesH1) {
  // Rotation with tiny a is still monotone: (x).u(x) = a |x|^2 > 0.
  ProblemSpec s;
  s.name = "rotation";
  s.dim = 2;
  s.a = 1e-3;
  s.b = 10.0;
  const Problem p = builtin(s);
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(1.0, 0.7), family, 0.5);
  EXPECT_EQ(report.get("H1.i").verdict, Verdict::holds);
  EXPECT_EQ(report.get("H1.ii").verdict, Verdict::holds);
  EXPECT_EQ(report.get("H2").verdict, Verdict::asserted);
  EXPECT_EQ(report.get("H3.i").verdict, Verdict::asserted);
}

TEST(Hypotheses, H3iiFailsForSingularSigma) {
  ProblemSpec s = linear(2);
  s.noise.covariance = {1, 0, 0, 0};
  const Problem p = builtin(s);
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(1.0, 0.7), family, 0.5);
  EXPECT_EQ(report.get("H3.ii").verdict, Verdict::fails);
}

namespace {

// u(x) = x - 2x^3: Jacobian 1 at the root but x u(x) < 0 for |x| > 1/sqrt(2).
class Folding final : public DriftField {
 public:
  void evaluate(const Vector& x, Vector& out) const override {
    out = x - 2.0 * x.cwiseProduct(x).cwiseProduct(x);
  }
};

}  // namespace

TEST(Hypotheses, H1FailsWithWitness) {
  const Problem p("folding", v1(0.0), Matrix::Identity(1, 1), std::make_shared<Folding>(),
                  NoiseModel(NoiseKind::gaussian, Matrix::Identity(1, 1)));
  const auto family = CompactFamily::balls(p.root(), 1.0, 2.0);
  const auto report = check_hypotheses(p, GainSchedule(1.0, 0.7), family, 0.5);
  const auto& h1 = report.get("H1.i");
  EXPECT_EQ(h1.verdict, Verdict::fails);
  ASSERT_TRUE(h1.witness.has_value());
  const double w = (*h1.witness)[0];
  EXPECT_LT(w * p.drift(*h1.witness)[0], 0.0);
  EXPECT_EQ(report.get("H1.ii").verdict, Verdict::holds);
}
