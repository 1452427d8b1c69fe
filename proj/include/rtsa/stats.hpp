#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rtsa::stats {

double normal_cdf(double x, double variance = 1.0);
double chi_squared_cdf(double x, double dof);
double chi_squared_quantile(double p, double dof);

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
};

/// One-sample two-sided Kolmogorov-Smirnov test against `cdf`.
/// p-value from the limiting Kolmogorov law with Stephens' small-sample
/// correction: lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) D.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

}  // namespace rtsa::stats
