#include "rtsa/cli/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rtsa/errors.hpp"

namespace rtsa::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"name", "dim", "root", "matrix", "c", "a", "b"}},
      {"noise", {"kind", "covariance", "state_scale", "rho", "tail_index"}},
      {"schedule", {"gamma", "alpha"}},
      {"compact", {"shape", "center", "r0", "half_widths", "growth"}},
      {"run", {"x0", "n_steps", "replicates", "seed", "checkpoints", "algorithm", "eta",
               "window_start", "output_dir"}},
  };
  return keys;
}

std::vector<std::string> tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

double to_double(const std::string& field, const std::string& token) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "'" + token + "' is not a number");
  return value;
}

std::uint64_t to_unsigned(const std::string& field, const std::string& token) {
  std::uint64_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(field, "'" + token + "' is not a non-negative integer");
  }
  return value;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    auto s = tree_.get_child_optional(section);
    if (!s) return std::nullopt;
    auto v = s->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  void text(const std::string& section, const std::string& key, std::string& out) const {
    if (auto v = raw(section, key)) out = trim(*v);
  }

  void number(const std::string& section, const std::string& key, double& out) const {
    if (auto v = raw(section, key)) out = to_double(section + "." + key, single(section, key, *v));
  }

  template <class Int>
  void integer(const std::string& section, const std::string& key, Int& out) const {
    if (auto v = raw(section, key)) {
      out = static_cast<Int>(to_unsigned(section + "." + key, single(section, key, *v)));
    }
  }

  void numbers(const std::string& section, const std::string& key, std::vector<double>& out) const {
    if (auto v = raw(section, key)) {
      out.clear();
      for (const auto& t : tokens(*v)) out.push_back(to_double(section + "." + key, t));
    }
  }

  void indices(const std::string& section, const std::string& key, std::vector<StepIndex>& out) const {
    if (auto v = raw(section, key)) {
      out.clear();
      for (const auto& t : tokens(*v)) out.push_back(to_unsigned(section + "." + key, t));
    }
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
  }

 private:
  static std::string single(const std::string& section, const std::string& key, const std::string& v) {
    auto t = tokens(v);
    if (t.size() != 1) throw ConfigError(section + "." + key, "expected a single value");
    return t.front();
  }

  const pt::ptree& tree_;
};

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty()) throw ConfigError(section, "key outside any section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

template <class Fn>
auto field(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(name, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("<syntax>", e.message(), static_cast<int>(e.line()));
  }
  check_schema(tree);
  const Reader r(tree);

  ExperimentConfig config;
  montecarlo::EnsembleConfig& ens = config.ensemble;
  problems::ProblemSpec& p = ens.problem;
  r.text("problem", "name", p.name);
  const auto& names = problems::builtin_names();
  if (std::find(names.begin(), names.end(), p.name) == names.end()) {
    throw ConfigError("problem.name", "unknown problem '" + p.name + "'");
  }
  r.integer("problem", "dim", p.dim);
  if (p.dim < 1) throw ConfigError("problem.dim", "must be >= 1");
  r.numbers("problem", "root", p.root);
  r.numbers("problem", "matrix", p.matrix);
  r.number("problem", "c", p.c);
  r.number("problem", "a", p.a);
  r.number("problem", "b", p.b);

  problems::NoiseSpec& noise = p.noise;
  if (auto kind = r.raw("noise", "kind")) {
    noise.kind = field("noise.kind", [&] { return problems::noise_kind_from_string(Reader::trim(*kind)); });
  }
  r.numbers("noise", "covariance", noise.covariance);
  r.number("noise", "state_scale", noise.state_scale);
  r.number("noise", "rho", noise.rho);
  r.number("noise", "tail_index", noise.tail_index);

  double gamma = ens.schedule.gamma(), alpha = ens.schedule.alpha();
  r.number("schedule", "gamma", gamma);
  r.number("schedule", "alpha", alpha);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("schedule.gamma", "must be a positive finite number");
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ConfigError("schedule.alpha", "must lie in (1/2, 1]");
  ens.schedule = field("schedule", [&] { return GainSchedule(gamma, alpha); });

  CompactSpec& family = ens.family;
  if (auto shape = r.raw("compact", "shape")) {
    family.shape = field("compact.shape", [&] { return compact_shape_from_string(Reader::trim(*shape)); });
  }
  r.numbers("compact", "center", family.center);
  r.number("compact", "r0", family.r0);
  r.numbers("compact", "half_widths", family.half_widths);
  r.number("compact", "growth", family.growth);
  if (!(family.r0 > 0.0)) throw ConfigError("compact.r0", "must be > 0");
  if (!(family.growth > 1.0)) throw ConfigError("compact.growth", "must be > 1");

  r.numbers("run", "x0", ens.x0);
  r.integer("run", "n_steps", ens.n_steps);
  r.integer("run", "replicates", ens.replicates);
  r.integer("run", "seed", ens.base_seed);
  r.indices("run", "checkpoints", ens.checkpoints);
  if (auto algorithm = r.raw("run", "algorithm")) {
    ens.algorithm = field("run.algorithm", [&] {
      return montecarlo::algorithm_from_string(Reader::trim(*algorithm));
    });
  }
  r.number("run", "eta", ens.eta);
  r.integer("run", "window_start", ens.window_start);
  r.text("run", "output_dir", config.output_dir);

  montecarlo::validate(ens);
  // Resolve parameters now so a bad matrix is reported as a config error.
  field("problem", [&] { return problems::builtin(p); });
  return config;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  return parse_config(in);
}

namespace {

std::string num(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
  return out;
}

std::string join(const std::vector<StepIndex>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& config) {
  const montecarlo::EnsembleConfig& e = config.ensemble;
  const problems::ProblemSpec& p = e.problem;
  std::ostringstream out;
  out << "[problem]\n"
      << "name = " << p.name << "\n"
      << "dim = " << p.dim << "\n"
      << "root = " << join(p.root) << "\n"
      << "matrix = " << join(p.matrix) << "\n"
      << "c = " << num(p.c) << "\n"
      << "a = " << num(p.a) << "\n"
      << "b = " << num(p.b) << "\n\n"
      << "[noise]\n"
      << "kind = " << problems::to_string(p.noise.kind) << "\n"
      << "covariance = " << join(p.noise.covariance) << "\n"
      << "state_scale = " << num(p.noise.state_scale) << "\n"
      << "rho = " << num(p.noise.rho) << "\n"
      << "tail_index = " << num(p.noise.tail_index) << "\n\n"
      << "[schedule]\n"
      << "gamma = " << num(e.schedule.gamma()) << "\n"
      << "alpha = " << num(e.schedule.alpha()) << "\n\n"
      << "[compact]\n"
      << "shape = " << to_string(e.family.shape) << "\n"
      << "center = " << join(e.family.center) << "\n"
      << "r0 = " << num(e.family.r0) << "\n"
      << "half_widths = " << join(e.family.half_widths) << "\n"
      << "growth = " << num(e.family.growth) << "\n\n"
      << "[run]\n"
      << "x0 = " << join(e.x0) << "\n"
      << "n_steps = " << e.n_steps << "\n"
      << "replicates = " << e.replicates << "\n"
      << "seed = " << e.base_seed << "\n"
      << "checkpoints = " << join(e.checkpoints) << "\n"
      << "algorithm = " << montecarlo::to_string(e.algorithm) << "\n"
      << "eta = " << num(e.eta) << "\n"
      << "window_start = " << e.window_start << "\n"
      << "output_dir = " << config.output_dir << "\n";
  return out.str();
}

}  // namespace rtsa::cli
