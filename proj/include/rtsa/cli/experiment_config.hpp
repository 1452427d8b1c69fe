#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "rtsa/montecarlo.hpp"

namespace rtsa::cli {

/// INI-style experiment description. Sections and keys:
///
///   [problem]   name dim root matrix c a b
///   [noise]     kind covariance state_scale rho tail_index
///   [schedule]  gamma alpha
///   [compact]   shape center r0 half_widths growth
///   [run]       x0 n_steps replicates seed checkpoints algorithm eta
///               window_start output_dir
///
/// Vectors and matrices are whitespace-separated (matrices row-major).
/// Absent keys take their defaults; unknown sections or keys are errors.
struct ExperimentConfig {
  montecarlo::EnsembleConfig ensemble;
  std::string output_dir;  // empty: $RTSA_OUTPUT_DIR, then "."

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError naming the section.key at fault. Syntax errors carry
/// the line number. Problem names are resolved against the built-in zoo.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key is written, numbers in shortest round-trip form, so
/// parse_config_string(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace rtsa::cli
