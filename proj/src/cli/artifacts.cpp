#include "rtsa/cli/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtsa/errors.hpp"

namespace rtsa::cli {

using nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

ordered_json to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json to_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json to_json(const asymptotics::LimitCovariance& theory) {
  ordered_json j;
  j["regime"] = to_string(theory.regime);
  j["V"] = to_json(theory.v);
  j["Q"] = to_json(theory.q);
  j["h5_min_eigenvalue"] = theory.h5_min_eigenvalue;
  return j;
}

namespace {

ordered_json to_json(const stats::KsResult& ks) {
  return ordered_json{{"statistic", ks.statistic}, {"p_value", ks.p_value}};
}

}  // namespace

ordered_json to_json(const montecarlo::EnsembleSummary& summary) {
  ordered_json j;
  j["theory"] = to_json(summary.theory);
  j["replicates"] = summary.replicates;
  j["divergence_count"] = summary.divergence_count;
  j["mu_hat"] = summary.mu_hat;
  j["eta"] = summary.eta;
  j["cov_rel_err"] = summary.checkpoints.empty() ? std::nan("") : summary.checkpoints.back().cov_rel_err;
  ordered_json checkpoints = ordered_json::array();
  for (const auto& c : summary.checkpoints) {
    ordered_json cj;
    cj["n"] = c.n;
    cj["samples"] = c.samples;
    cj["mean"] = to_json(c.mean);
    cj["covariance"] = to_json(c.covariance);
    cj["cov_rel_err"] = c.cov_rel_err;
    cj["restricted_second_moment"] = c.restricted_second_moment;
    cj["window_fraction"] = c.window_fraction;
    if (c.normality) {
      ordered_json nj;
      nj["mahalanobis_ks"] = to_json(c.normality->mahalanobis);
      ordered_json coords = ordered_json::array();
      for (const auto& ks : c.normality->coordinates) coords.push_back(to_json(ks));
      nj["coordinate_ks"] = std::move(coords);
      nj["gaussian"] = c.normality->gaussian;
      cj["normality"] = std::move(nj);
    } else {
      cj["normality"] = nullptr;
    }
    checkpoints.push_back(std::move(cj));
  }
  j["checkpoints"] = std::move(checkpoints);
  ordered_json hist = ordered_json::array();
  for (const auto& [sigma, count] : summary.truncation.histogram) hist.push_back({sigma, count});
  j["truncation"] = {{"histogram", std::move(hist)},
                     {"fraction_zero", summary.truncation.fraction_zero},
                     {"max_sigma", summary.truncation.max_sigma},
                     {"fraction_stabilized", summary.truncation.fraction_stabilized}};
  return j;
}

ordered_json to_json(const problems::HypothesisReport& report) {
  ordered_json j;
  j["mu_hat"] = report.mu_hat;
  j["eta"] = report.eta;
  ordered_json results = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["verdict"] = to_string(r.verdict);
    rj["evidence"] = r.evidence;
    rj["value"] = r.value ? ordered_json(*r.value) : ordered_json(nullptr);
    rj["witness"] = r.witness ? to_json(*r.witness) : ordered_json(nullptr);
    results.push_back(std::move(rj));
  }
  j["results"] = std::move(results);
  j["all_hold"] = report.all_hold();
  return j;
}

ordered_json to_json(const proofcheck::BatteryReport& report) {
  ordered_json props = ordered_json::array();
  for (const auto& p : report.properties) {
    props.push_back({{"name", p.name},
                     {"passed", p.passed},
                     {"observed_gap", p.observed_gap},
                     {"threshold", p.threshold},
                     {"detail", p.detail}});
  }
  return {{"properties", std::move(props)}, {"all_passed", report.all_passed()}};
}

std::string samples_csv(const montecarlo::EnsembleResult& result) {
  const std::size_t d = result.summary.theory.v.rows();
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\nreplicate,checkpoint";
  for (std::size_t i = 0; i < d; ++i) out += ",coord_" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < result.outcomes.size(); ++r) {
    const auto& o = result.outcomes[r];
    for (std::size_t c = 0; c < o.deltas.size(); ++c) {
      out += std::to_string(r) + ',' + std::to_string(result.checkpoints[c]);
      for (Eigen::Index i = 0; i < o.deltas[c].size(); ++i) out += ',' + format_double(o.deltas[c](i));
      out += '\n';
    }
  }
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rtsa::cli
