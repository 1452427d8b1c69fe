#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtsa/compact_family.hpp"
#include "rtsa/gain_schedule.hpp"
#include "rtsa/problems.hpp"

namespace rtsa::problems {

enum class Verdict { holds, fails, not_applicable, asserted };

const char* to_string(Verdict verdict) noexcept;

struct HypothesisResult {
  std::string id;         // "H1.i", "H1.ii", "H2", "H3.i", "H3.ii", "H4", "H5"
  Verdict verdict = Verdict::holds;
  std::string evidence;   // how the verdict was reached
  std::optional<double> value;   // observed margin / eigenvalue / error
  std::optional<Vector> witness; // counterexample point, when one was found
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;
  double mu_hat = 0.0;  // inf_j d(x*, dK_j)
  double eta = 0.0;

  bool all_hold() const;
  const HypothesisResult& get(const std::string& id) const;
};

struct CheckOptions {
  /// H1.i is sampled on a grid (d <= 2) plus a random cloud in this radius.
  double sample_radius = 10.0;
  int cloud_points = 4096;
  std::uint64_t seed = 0x48594f50ULL;
  double fd_step = 1e-5;
  double jacobian_rel_tol = 1e-5;
};

/// inf over representable j of the distance from x* to the boundary of K_j.
double boundary_margin(const CompactFamily& family, const Vector& root);

/// Default localisation radius: min(1, mu / 2).
double default_eta(double mu_hat);

/// Checks H1-H5. H1.i is sampled, not proven; H2/H3 are certified by the
/// noise-model construction; H5 is evaluated only when alpha = 1.
HypothesisReport check_hypotheses(const Problem& problem, const GainSchedule& schedule,
                                  const CompactFamily& family, double eta,
                                  const CheckOptions& options = {});

/// Smallest eigenvalue of the symmetric part of gamma*A - I/2.
double h5_min_eigenvalue(const Matrix& jacobian, double gamma);

}  // namespace rtsa::problems
