#include "rtsa/cli/commands.hpp"

#include <cstdlib>
#include <iomanip>
#include <ostream>

#include "rtsa/cli/artifacts.hpp"
#include "rtsa/cli/experiment_config.hpp"
#include "rtsa/cli/plot.hpp"
#include "rtsa/errors.hpp"

namespace rtsa::cli {
namespace {

using nlohmann::ordered_json;

ExperimentConfig load_with_overrides(const CommonOptions& options) {
  ExperimentConfig config = load_config(options.config);
  if (options.seed_override) config.ensemble.base_seed = *options.seed_override;
  if (options.checkpoints) {
    config.ensemble.checkpoints = *options.checkpoints;
    montecarlo::validate(config.ensemble);
  }
  return config;
}

ordered_json experiment_json(const ExperimentConfig& config) {
  const auto& e = config.ensemble;
  ordered_json j;
  j["problem"] = e.problem.name;
  j["dim"] = e.problem.dim;
  j["gamma"] = e.schedule.gamma();
  j["alpha"] = e.schedule.alpha();
  j["compact"] = to_string(e.family.shape);
  j["n_steps"] = e.n_steps;
  j["replicates"] = e.replicates;
  j["seed"] = e.base_seed;
  j["algorithm"] = montecarlo::to_string(e.algorithm);
  return j;
}

// Runs `body`, mapping the library's failure modes onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kValidationFailure;
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::string& configured) {
  if (flag) return *flag;
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("RTSA_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

int cmd_run(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_with_overrides(options);
    const montecarlo::EnsembleResult result = montecarlo::run_ensemble(config.ensemble, options.threads);
    const auto dir = resolve_output_dir(options.out, config.output_dir);

    ordered_json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["experiment"] = experiment_json(config);
    summary.update(to_json(result.summary));
    write_file(dir / "samples.csv", samples_csv(result));
    write_file(dir / "summary.json", dump(summary));

    const auto& s = result.summary;
    const auto& last = s.checkpoints.back();
    out << "n=" << last.n << " M=" << s.replicates << " cov_rel_err=" << format_double(last.cov_rel_err)
        << " divergences=" << s.divergence_count << " -> " << (dir / "summary.json").string() << "\n";
    return s.divergence_count > 0 ? kDivergenceOnly : kOk;
  });
}

int cmd_theory(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_with_overrides(options);
    const problems::Problem problem = problems::builtin(config.ensemble.problem);
    const auto theory = asymptotics::limit_covariance(
        problem.jacobian_at_root(), problem.noise_cov_at_root(), config.ensemble.schedule);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j.update(to_json(theory));
    out << dump(j);
    return kOk;
  });
}

int cmd_check(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_with_overrides(options);
    const auto& e = config.ensemble;
    const problems::Problem problem = problems::builtin(e.problem);
    const CompactFamily family = make_family(e.family, problem.root());
    const double eta = e.eta > 0.0 ? e.eta : problems::default_eta(problems::boundary_margin(family, problem.root()));
    const auto report = problems::check_hypotheses(problem, e.schedule, family, eta);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["note"] = "H1.i is sampled, not a proof";
    j.update(to_json(report));
    out << dump(j);
    return report.all_hold() ? kOk : kValidationFailure;
  });
}

int cmd_proofcheck(const ProofcheckOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    proofcheck::BatteryOptions battery;
    battery.q = options.q;
    battery.threads = options.threads;
    if (options.seed_override) battery.seed = *options.seed_override;
    const auto report = proofcheck::run_battery(battery);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["q"] = options.q;
    j.update(to_json(report));
    const std::string text = dump(j);
    if (options.out) write_file(*options.out / "proofcheck.json", text);
    out << text;
    return report.all_passed() ? kOk : kValidationFailure;
  });
}

int cmd_plot(const std::filesystem::path& run_dir, const std::optional<std::filesystem::path>& out_dir,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string summary = read_file(run_dir / "summary.json");
    const std::string samples = read_file(run_dir / "samples.csv");
    const PlotFiles files = emit_plot(summary, samples, out_dir.value_or(run_dir));
    out << files.script.string() << "\n";
    for (const auto& f : files.data) out << f.string() << "\n";
    return kOk;
  });
}

}  // namespace rtsa::cli
