#include "rtsa/cli/plot.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rtsa/cli/artifacts.hpp"
#include "rtsa/errors.hpp"
#include "rtsa/stats.hpp"

namespace rtsa::cli {
namespace {

Matrix matrix_from(const nlohmann::json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rows[i].size() != rows.size()) throw Error("summary: non-square matrix");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j].is_null() ? std::nan("") : rows[i][j].get<double>();
  }
  return m;
}

struct Samples {
  std::vector<StepIndex> checkpoint;
  std::vector<Vector> delta;
};

Samples parse_samples(const std::string& csv, Eigen::Index d) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema_version=", 0) != 0) {
    throw Error("samples.csv: missing schema_version line");
  }
  if (!std::getline(in, line)) throw Error("samples.csv: missing header");
  if (std::count(line.begin(), line.end(), ',') != d + 1) {
    throw Error("samples.csv: header does not match the summary's dimension");
  }
  Samples s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (static_cast<Eigen::Index>(cells.size()) != d + 2) throw Error("samples.csv: ragged row");
    s.checkpoint.push_back(std::stoull(cells[1]));
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = std::stod(cells[static_cast<std::size_t>(i) + 2]);
    s.delta.push_back(std::move(v));
  }
  if (s.delta.empty()) throw Error("samples.csv: no samples");
  return s;
}

}  // namespace

PlotFiles emit_plot(const std::string& summary_json, const std::string& samples_csv,
                    const std::filesystem::path& out_dir) {
  const auto summary = nlohmann::json::parse(summary_json);
  if (summary.value("schema_version", 0) != kSchemaVersion) throw Error("summary: unsupported schema_version");
  const Matrix v = matrix_from(summary.at("theory").at("V"));
  const Eigen::Index d = v.rows();
  const Samples samples = parse_samples(samples_csv, d);

  Eigen::LLT<Matrix> llt(v);
  if (llt.info() != Eigen::Success) throw Error("summary: V is singular, no Mahalanobis QQ plot");
  const StepIndex last = *std::max_element(samples.checkpoint.begin(), samples.checkpoint.end());
  std::vector<double> m;
  for (std::size_t r = 0; r < samples.delta.size(); ++r) {
    if (samples.checkpoint[r] != last || !samples.delta[r].allFinite()) continue;
    m.push_back(llt.matrixL().solve(samples.delta[r]).squaredNorm());
  }
  if (m.empty()) throw Error("samples.csv: no finite samples at the last checkpoint");
  std::sort(m.begin(), m.end());

  PlotFiles files;
  files.script = out_dir / "plot.gp";
  files.data = {out_dir / "qq_mahalanobis.csv", out_dir / "variance_vs_n.csv",
                out_dir / "truncation_hist.csv"};

  std::string qq = "# chi2_quantile,mahalanobis (n=" + std::to_string(last) + ")\n";
  const double dof = static_cast<double>(d);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(m.size());
    qq += format_double(stats::chi_squared_quantile(p, dof)) + "," + format_double(m[i]) + "\n";
  }

  std::string var = "# n,trace_empirical,trace_theory\n";
  const std::string trace_v = format_double(v.trace());
  for (const auto& c : summary.at("checkpoints")) {
    const Matrix cov = matrix_from(c.at("covariance"));
    var += std::to_string(c.at("n").get<StepIndex>()) + "," + format_double(cov.trace()) + "," + trace_v + "\n";
  }

  std::string hist = "# final_sigma,replicates\n";
  for (const auto& bin : summary.at("truncation").at("histogram")) {
    hist += std::to_string(bin.at(0).get<StepIndex>()) + "," + std::to_string(bin.at(1).get<std::size_t>()) + "\n";
  }

  // Data paths are relative so the script works from out_dir.
  std::string script =
      "# gnuplot script; run from this directory: gnuplot plot.gp\n"
      "set terminal pngcairo size 800,600\n"
      "set datafile separator ','\n"
      "set key top left\n"
      "\n"
      "set output 'qq_mahalanobis.png'\n"
      "set title 'Mahalanobis distances vs chi-square(" + std::to_string(d) + ") quantiles'\n"
      "set xlabel 'chi-square quantile'\n"
      "set ylabel 'sorted Delta'' V^-1 Delta'\n"
      "plot 'qq_mahalanobis.csv' using 1:2 with points pt 7 ps 0.3 title 'samples', \\\n"
      "     x with lines lw 2 title 'y = x'\n"
      "\n"
      "set output 'variance_vs_n.png'\n"
      "set title 'trace of empirical covariance of Delta_n'\n"
      "set xlabel 'n'\n"
      "set ylabel 'trace'\n"
      "set logscale x\n"
      "plot 'variance_vs_n.csv' using 1:2 with linespoints pt 7 title 'empirical', \\\n"
      "     'variance_vs_n.csv' using 1:3 with lines lw 2 title 'theory'\n"
      "unset logscale x\n"
      "\n"
      "set output 'truncation_hist.png'\n"
      "set title 'final truncation count per replicate'\n"
      "set xlabel 'sigma_n'\n"
      "set ylabel 'replicates'\n"
      "set style fill solid 0.6\n"
      "set boxwidth 0.8\n"
      "plot 'truncation_hist.csv' using 1:2 with boxes notitle\n";

  write_file(files.script, script);
  write_file(files.data[0], qq);
  write_file(files.data[1], var);
  write_file(files.data[2], hist);
  return files;
}

}  // namespace rtsa::cli
