// rtsa: randomly truncated Robbins-Monro experiments.
//
// Exit codes: 0 success, 1 validation failure, 2 some replicates diverged.

#include <iostream>

#include "CLI11.hpp"
#include "rtsa/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace rtsa::cli;
  CLI::App app{"Randomly truncated Robbins-Monro toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string out_flag;
  std::uint64_t seed = 0;
  std::vector<rtsa::StepIndex> checkpoints;

  auto add_common = [&](CLI::App* sub, bool with_run_flags) {
    sub->add_option("--config", common.config, "experiment config (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--threads", common.threads, "OpenMP threads (0: runtime default)");
    sub->add_option("--seed-override", seed, "replace the config's base seed");
    if (with_run_flags) {
      sub->add_option("--out", out_flag, "output directory (default: config, then $RTSA_OUTPUT_DIR)");
      sub->add_option("--checkpoints", checkpoints, "replace the config's checkpoints")->delimiter(',');
    }
  };

  auto* run = app.add_subcommand("run", "run a replicate ensemble, write samples.csv and summary.json");
  add_common(run, true);
  auto* theory = app.add_subcommand("theory", "print the limit covariance V as JSON");
  add_common(theory, false);
  auto* check = app.add_subcommand("check", "check hypotheses H1-H5 for a config");
  add_common(check, false);

  ProofcheckOptions proof;
  auto* proofcheck = app.add_subcommand("proofcheck", "run the grid / weighted-sum / noise-variance battery");
  proofcheck->add_option("--q", proof.q, "scalar drift q (matrix case uses diag(q, 2q))");
  proofcheck->add_option("--threads", proof.threads, "OpenMP threads");
  proofcheck->add_option("--seed-override", seed, "replace the battery seed");
  proofcheck->add_option("--out", out_flag, "also write proofcheck.json here");

  std::string run_dir;
  auto* plot = app.add_subcommand("plot", "emit a gnuplot script and data files from a run directory");
  plot->add_option("run_dir", run_dir, "directory holding summary.json and samples.csv")->required();
  plot->add_option("--out", out_flag, "where to write the plot files (default: run_dir)");

  CLI11_PARSE(app, argc, argv);

  auto seed_given = [&](CLI::App* sub) { return sub->count("--seed-override") > 0; };
  auto out_given = [&](CLI::App* sub) { return sub->count("--out") > 0; };

  for (CLI::App* sub : {run, theory, check}) {
    if (!*sub) continue;
    if (seed_given(sub)) common.seed_override = seed;
    if (sub == run) {
      if (out_given(sub)) common.out = out_flag;
      if (sub->count("--checkpoints")) common.checkpoints = checkpoints;
    }
  }
  if (*run) return cmd_run(common, std::cout, std::cerr);
  if (*theory) return cmd_theory(common, std::cout, std::cerr);
  if (*check) return cmd_check(common, std::cout, std::cerr);
  if (*proofcheck) {
    if (seed_given(proofcheck)) proof.seed_override = seed;
    if (out_given(proofcheck)) proof.out = out_flag;
    return cmd_proofcheck(proof, std::cout, std::cerr);
  }
  if (out_given(plot)) return cmd_plot(run_dir, std::filesystem::path(out_flag), std::cout, std::cerr);
  return cmd_plot(run_dir, std::nullopt, std::cout, std::cerr);
}
