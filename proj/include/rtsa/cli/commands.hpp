#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtsa/types.hpp"

namespace rtsa::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,  // bad config, failed hypothesis, failed check
  kDivergenceOnly = 2,     // everything valid but some replicates diverged
};

struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides config output_dir
  int threads = 0;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::vector<StepIndex>> checkpoints;
};

/// Writes samples.csv and summary.json; prints a one-line verdict.
int cmd_run(const CommonOptions& options, std::ostream& out, std::ostream& err);
/// Prints {V, Q, regime, h5_min_eigenvalue} as JSON.
int cmd_theory(const CommonOptions& options, std::ostream& out, std::ostream& err);
/// Prints the hypothesis report; exit 1 if any verdict fails.
int cmd_check(const CommonOptions& options, std::ostream& out, std::ostream& err);

struct ProofcheckOptions {
  double q = 1.0;
  std::optional<std::filesystem::path> out;  // also write proofcheck.json here
  int threads = 0;
  std::optional<std::uint64_t> seed_override;
};
int cmd_proofcheck(const ProofcheckOptions& options, std::ostream& out, std::ostream& err);

/// Reads summary.json and samples.csv from `run_dir`, writes plot.gp and its
/// three data files into `out_dir` (default: run_dir).
int cmd_plot(const std::filesystem::path& run_dir, const std::optional<std::filesystem::path>& out_dir,
             std::ostream& out, std::ostream& err);

/// --out, else the config's output_dir, else $RTSA_OUTPUT_DIR, else ".".
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::string& configured);

}  // namespace rtsa::cli
