#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rtsa/montecarlo.hpp"

namespace rtsa::montecarlo {

double covariance_relative_error(const Matrix& c, const Matrix& v) {
  auto spectral = [](const Matrix& m) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .cwiseAbs()
        .maxCoeff();
  };
  const double denom = spectral(v);
  const double num = spectral(c - v);
  return denom > 0.0 ? num / denom : num;
}

NormalityReport normality_report(const Matrix& samples, const Matrix& v) {
  const Eigen::Index d = v.rows();
  if (samples.cols() != d) throw std::invalid_argument("normality_report: dimension mismatch");
  if (samples.rows() < 100) throw std::invalid_argument("normality_report: need at least 100 samples");
  Eigen::LLT<Matrix> llt(0.5 * (v + v.transpose()));
  if (llt.info() != Eigen::Success) throw std::invalid_argument("normality_report: V is singular");

  NormalityReport report;
  report.samples = static_cast<std::size_t>(samples.rows());
  std::vector<double> mahalanobis(report.samples);
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    const Vector w = llt.matrixL().solve(samples.row(r).transpose());
    mahalanobis[static_cast<std::size_t>(r)] = w.squaredNorm();
  }
  const double dof = static_cast<double>(d);
  report.mahalanobis = stats::ks_test(std::move(mahalanobis),
                                      [dof](double x) { return stats::chi_squared_cdf(x, dof); });
  report.gaussian = report.mahalanobis.p_value > 0.01;
  for (Eigen::Index i = 0; i < d; ++i) {
    std::vector<double> column(samples.col(i).data(), samples.col(i).data() + samples.rows());
    const double var = v(i, i);
    report.coordinates.push_back(
        stats::ks_test(std::move(column), [var](double x) { return stats::normal_cdf(x, var); }));
    report.gaussian = report.gaussian && report.coordinates.back().p_value > 0.01;
  }
  const Vector mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(samples.rows() - 1);
  report.cov_rel_err = covariance_relative_error(cov, v);
  return report;
}

}  // namespace rtsa::montecarlo
