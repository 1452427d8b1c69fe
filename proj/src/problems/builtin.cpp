#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rtsa/problems.hpp"

namespace rtsa::problems {
namespace {

class LinearDrift final : public DriftField {
 public:
  LinearDrift(Matrix a, Vector root) : a_(std::move(a)), root_(std::move(root)) {}
  void evaluate(const Vector& x, Vector& out) const override { out.noalias() = a_ * (x - root_); }

 private:
  Matrix a_;
  Vector root_;
};

// u(x) = (x - x*) + |x - x*|^2 (x - x*)
class CubicDrift final : public DriftField {
 public:
  explicit CubicDrift(Vector root) : root_(std::move(root)) {}
  void evaluate(const Vector& x, Vector& out) const override {
    out = x - root_;
    out *= 1.0 + out.squaredNorm();
  }

 private:
  Vector root_;
};

// u(x) = e^x - c
class LogisticDrift final : public DriftField {
 public:
  explicit LogisticDrift(double c) : c_(c) {}
  void evaluate(const Vector& x, Vector& out) const override {
    out.resize(1);
    out[0] = std::exp(x[0]) - c_;
  }

 private:
  double c_;
};

Matrix square_from(const std::vector<double>& values, int d, const char* what) {
  if (values.empty()) return Matrix::Identity(d, d);
  if (values.size() != static_cast<std::size_t>(d) * d) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(d * d) +
                                " entries, got " + std::to_string(values.size()));
  }
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = values[static_cast<std::size_t>(i) * d + j];
  return m;
}

Vector point_from(const std::vector<double>& values, int d) {
  if (values.empty()) return Vector::Zero(d);
  if (values.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("root: expected " + std::to_string(d) + " coordinates, got " +
                                std::to_string(values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), d);
}

void require_positive_symmetric_part(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
  if (!(min_eig > 0.0)) {
    throw std::invalid_argument("Jacobian symmetric part is not positive definite (min eigenvalue " +
                                std::to_string(min_eig) + ")");
  }
}

NoiseModel make_noise(const NoiseSpec& spec, int d) {
  return NoiseModel(spec.kind, square_from(spec.covariance, d, "noise covariance"),
                    spec.state_scale, spec.rho, spec.tail_index);
}

}  // namespace

Problem::Problem(std::string name, Vector root, Matrix jacobian_at_root,
                 std::shared_ptr<const DriftField> drift, NoiseModel noise)
    : name_(std::move(name)),
      root_(std::move(root)),
      jacobian_(std::move(jacobian_at_root)),
      drift_(std::move(drift)),
      noise_(std::move(noise)) {
  if (jacobian_.rows() != root_.size() || jacobian_.cols() != root_.size() ||
      noise_.covariance_at_root().rows() != root_.size()) {
    throw std::invalid_argument("problem '" + name_ + "': dimension mismatch");
  }
}

Vector Problem::drift(const Vector& x) const {
  Vector out(dim());
  drift_->evaluate(x, out);
  return out;
}

Vector Problem::oracle(const Vector& x, RandomStream& rng) const {
  Vector u = drift(x);
  Vector dm(dim());
  noise(x, rng, dm);
  return u + dm;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"linear", "cubic", "logistic", "rotation"};
  return names;
}

Problem builtin(const ProblemSpec& spec) {
  if (spec.name == "linear") {
    if (spec.dim < 1) throw std::invalid_argument("linear: dim must be >= 1");
    Matrix a = square_from(spec.matrix, spec.dim, "linear matrix");
    require_positive_symmetric_part(a);
    Vector root = point_from(spec.root, spec.dim);
    auto drift = std::make_shared<LinearDrift>(a, root);
    return Problem("linear", root, a, drift, make_noise(spec.noise, spec.dim));
  }
  if (spec.name == "cubic") {
    if (spec.dim < 1) throw std::invalid_argument("cubic: dim must be >= 1");
    Vector root = point_from(spec.root, spec.dim);
    return Problem("cubic", root, Matrix::Identity(spec.dim, spec.dim),
                   std::make_shared<CubicDrift>(root), make_noise(spec.noise, spec.dim));
  }
  if (spec.name == "logistic") {
    if (spec.dim != 1) throw std::invalid_argument("logistic: dim must be 1");
    if (!(spec.c > 0.0)) throw std::invalid_argument("logistic: c must be positive");
    return Problem("logistic", Vector::Constant(1, std::log(spec.c)),
                   Matrix::Constant(1, 1, spec.c), std::make_shared<LogisticDrift>(spec.c),
                   make_noise(spec.noise, 1));
  }
  if (spec.name == "rotation") {
    if (spec.dim != 2) throw std::invalid_argument("rotation: dim must be 2");
    if (!(spec.a > 0.0)) {
      throw std::invalid_argument("rotation: a must be positive (symmetric part a*I)");
    }
    Matrix a(2, 2);
    a << spec.a, spec.b, -spec.b, spec.a;
    Vector root = point_from(spec.root, 2);
    return Problem("rotation", root, a, std::make_shared<LinearDrift>(a, root),
                   make_noise(spec.noise, 2));
  }
  throw std::invalid_argument("unknown problem '" + spec.name + "'");
}

Matrix finite_difference_jacobian(const Problem& problem, const Vector& x, double h) {
  const Eigen::Index d = problem.dim();
  Matrix jac(d, d);
  Vector plus(d), minus(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Vector xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    problem.drift(xp, plus);
    problem.drift(xm, minus);
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

}  // namespace rtsa::problems
