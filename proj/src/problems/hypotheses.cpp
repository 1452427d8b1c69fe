#include "rtsa/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rtsa::problems {
namespace {

double min_sym_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

std::vector<Vector> h1_sample_points(const Vector& root, const CheckOptions& opt) {
  const Eigen::Index d = root.size();
  std::vector<Vector> points;
  if (d == 1) {
    for (int i = 0; i <= 400; ++i) {
      points.push_back(root + Vector::Constant(1, -opt.sample_radius + i * opt.sample_radius / 200.0));
    }
  } else if (d == 2) {
    for (int i = 0; i <= 60; ++i)
      for (int j = 0; j <= 60; ++j) {
        Vector p(2);
        p << -opt.sample_radius + i * opt.sample_radius / 30.0,
            -opt.sample_radius + j * opt.sample_radius / 30.0;
        points.push_back(root + p);
      }
  }
  RandomStream rng(opt.seed, 0);
  for (int k = 0; k < opt.cloud_points; ++k) {
    Vector dir(d);
    for (Eigen::Index i = 0; i < d; ++i) dir[i] = rng.normal();
    const double r = opt.sample_radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(d));
    points.push_back(root + r * dir.normalized());
  }
  return points;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_applicable: return "not_applicable";
    case Verdict::asserted: return "asserted";
  }
  return "unknown";
}

bool HypothesisReport::all_hold() const {
  return std::none_of(results.begin(), results.end(),
                      [](const HypothesisResult& r) { return r.verdict == Verdict::fails; });
}

const HypothesisResult& HypothesisReport::get(const std::string& id) const {
  for (const auto& r : results)
    if (r.id == id) return r;
  throw std::out_of_range("no hypothesis result '" + id + "'");
}

double boundary_margin(const CompactFamily& family, const Vector& root) {
  double best = std::numeric_limits<double>::infinity();
  // Once x* is interior to K_j, d(x*, dK_j) only grows with j.
  for (std::size_t j = 0; j < 4096; ++j) {
    if (!std::isfinite(family.scale(j))) break;
    const double dist = family.distance_to_boundary(j, root);
    best = std::min(best, dist);
    if (family.contains(j, root) && dist > 0.0) break;
  }
  return best;
}

double default_eta(double mu_hat) { return std::min(1.0, mu_hat / 2.0); }

double h5_min_eigenvalue(const Matrix& jacobian, double gamma) {
  const Eigen::Index d = jacobian.rows();
  return min_sym_eigenvalue(gamma * jacobian - 0.5 * Matrix::Identity(d, d));
}

HypothesisReport check_hypotheses(const Problem& problem, const GainSchedule& schedule,
                                  const CompactFamily& family, double eta,
                                  const CheckOptions& options) {
  if (!(eta > 0.0)) throw std::invalid_argument("check_hypotheses: eta must be positive");
  HypothesisReport report;
  report.eta = eta;
  const Vector& root = problem.root();
  const Eigen::Index d = problem.dim();

  {  // H1.i: sampled monotonicity (x - x*) . u(x) > 0
    HypothesisResult r{"H1.i", Verdict::holds, "", std::nullopt, std::nullopt};
    const double at_root = problem.drift(root).norm();
    double worst = std::numeric_limits<double>::infinity();
    Vector worst_point;
    std::size_t n_checked = 0;
    Vector u(d);
    for (const Vector& x : h1_sample_points(root, options)) {
      const Vector offset = x - root;
      const double sq = offset.squaredNorm();
      if (sq == 0.0) continue;
      problem.drift(x, u);
      const double margin = offset.dot(u) / sq;
      ++n_checked;
      if (!(margin > worst)) {
        worst = margin;
        worst_point = x;
      }
    }
    r.value = worst;
    r.evidence = "sampled, not a proof: " + std::to_string(n_checked) +
                 " points within radius " + fmt(options.sample_radius) +
                 "; min (x-x*).u(x)/|x-x*|^2 = " + fmt(worst) + "; |u(x*)| = " + fmt(at_root);
    if (!(worst > 0.0) || at_root > 1e-12) {
      r.verdict = Verdict::fails;
      r.witness = worst_point;
    }
    report.results.push_back(std::move(r));
  }

  {  // H1.ii: A matches the finite-difference Jacobian and is positive
    HypothesisResult r{"H1.ii", Verdict::holds, "", std::nullopt, std::nullopt};
    const Matrix& a = problem.jacobian_at_root();
    const Matrix fd = finite_difference_jacobian(problem, root, options.fd_step);
    const double rel = (fd - a).norm() / std::max(a.norm(), std::numeric_limits<double>::min());
    const double min_eig = min_sym_eigenvalue(a);
    const bool symmetric = (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff();
    r.value = rel;
    r.evidence = "central differences h=" + fmt(options.fd_step) + ": relative error " + fmt(rel) +
                 "; symmetric part min eigenvalue " + fmt(min_eig) +
                 (symmetric ? "; A symmetric" : "; A not symmetric (symmetric part used)");
    if (!(rel <= options.jacobian_rel_tol) || !(min_eig > 0.0)) r.verdict = Verdict::fails;
    report.results.push_back(std::move(r));
  }

  const NoiseModel& noise = problem.noise_model();
  report.results.push_back({"H2", Verdict::asserted,
                            "martingale increments with locally bounded second moments: " +
                                noise.moment_certificate(),
                            std::nullopt, std::nullopt});

  {  // H3.i: certificate plus an empirical (2 + rho)-moment on the eta-ball
    RandomStream rng(options.seed, 1);
    Vector dm(d);
    double acc = 0.0;
    constexpr int kDraws = 20000;
    for (int k = 0; k < kDraws; ++k) {
      Vector dir(d);
      for (Eigen::Index i = 0; i < d; ++i) dir[i] = rng.normal();
      const Vector x = root + eta * rng.uniform_open() * dir.normalized();
      noise.sample(x, root, rng, dm);
      acc += std::pow(dm.norm(), 2.0 + noise.rho());
    }
    const double kappa = acc / kDraws;
    report.results.push_back({"H3.i", Verdict::asserted,
                              noise.moment_certificate() + "; empirical E|dM|^(2+rho) on eta-ball = " +
                                  fmt(kappa),
                              kappa, std::nullopt});
  }

  {  // H3.ii: limiting bracket Sigma must be positive definite
    const double min_eig = min_sym_eigenvalue(problem.noise_cov_at_root());
    HypothesisResult r{"H3.ii", min_eig > 0.0 ? Verdict::asserted : Verdict::fails,
                       "Sigma = covariance of the noise at x*; min eigenvalue " + fmt(min_eig),
                       min_eig, std::nullopt};
    report.results.push_back(std::move(r));
  }

  {  // H4
    report.mu_hat = boundary_margin(family, root);
    HypothesisResult r{"H4", report.mu_hat > 0.0 ? Verdict::holds : Verdict::fails,
                       "mu_hat = inf_j d(x*, dK_j) = " + fmt(report.mu_hat), report.mu_hat,
                       std::nullopt};
    report.results.push_back(std::move(r));
  }

  {  // H5 (alpha = 1 only)
    HypothesisResult r{"H5", Verdict::not_applicable, "only required when alpha = 1",
                       std::nullopt, std::nullopt};
    if (schedule.regime() == Regime::alpha_eq_1) {
      const double min_eig = h5_min_eigenvalue(problem.jacobian_at_root(), schedule.gamma());
      r.value = min_eig;
      r.verdict = min_eig > 0.0 ? Verdict::holds : Verdict::fails;
      r.evidence = "min eigenvalue of gamma*A - I/2 = " + fmt(min_eig);
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace rtsa::problems
