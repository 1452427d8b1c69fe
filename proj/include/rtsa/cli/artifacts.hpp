#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rtsa/hypotheses.hpp"
#include "rtsa/montecarlo.hpp"
#include "rtsa/proofcheck.hpp"

namespace rtsa::cli {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double x);

nlohmann::ordered_json to_json(const Matrix& m);
nlohmann::ordered_json to_json(const Vector& v);
nlohmann::ordered_json to_json(const asymptotics::LimitCovariance& theory);
nlohmann::ordered_json to_json(const montecarlo::EnsembleSummary& summary);
nlohmann::ordered_json to_json(const problems::HypothesisReport& report);
nlohmann::ordered_json to_json(const proofcheck::BatteryReport& report);

/// Delta samples, one row per (replicate, checkpoint); divergent replicates
/// contribute only the checkpoints they reached.
///   # schema_version=1
///   replicate,checkpoint,coord_0,...,coord_{d-1}
std::string samples_csv(const montecarlo::EnsembleResult& result);

/// Stable JSON text: two-space indent, trailing newline.
std::string dump(const nlohmann::ordered_json& j);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace rtsa::cli
