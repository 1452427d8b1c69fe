#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rtsa::cli {

/// Files produced by emit_plot, in write order.
struct PlotFiles {
  std::filesystem::path script;
  std::vector<std::filesystem::path> data;
};

/// gnuplot script (pngcairo, one png per panel) plus:
///   qq_mahalanobis.csv   sorted m_r against chi^2_d quantiles, last checkpoint
///   variance_vs_n.csv    n, trace of empirical covariance, trace of V
///   truncation_hist.csv  final sigma, replicate count
/// Throws rtsa::Error on missing, empty or inconsistent inputs.
PlotFiles emit_plot(const std::string& summary_json, const std::string& samples_csv,
                    const std::filesystem::path& out_dir);

}  // namespace rtsa::cli
