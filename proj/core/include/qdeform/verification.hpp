#pragma once

// The identity suite behind `qdeform verify`: every residual form checked
// over a parameter sweep against its contract.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdeform/qcalculus.hpp"

namespace qdeform {

enum class VerifyStatus { pass, fail, skip };

const char* to_string(VerifyStatus s) noexcept;

struct IdentityReport {
  std::string identity;
  std::string statement;
  /// Worst residual over the sweep, normalized by the scale of its terms.
  double max_residual = 0.0;
  double contract = 0.0;
  VerifyStatus status = VerifyStatus::skip;
  std::size_t checks = 0;
};

struct VerifyConfig {
  std::vector<double> q_values{0.5, 0.8, 0.9, 0.95, 0.99};
  /// Sample points are spread over [-x_max, x_max].
  double x_max = 5.0;
  /// Replaces every per-identity contract when set.
  std::optional<double> contract_override;
  std::uint64_t seed = 7;
};

struct VerifyReport {
  std::vector<IdentityReport> entries;

  bool all_passed() const noexcept;
  std::vector<std::string> failures() const;
};

VerifyReport run_identity_suite(const VerifyConfig& config = {});

/// Max relative gap between the physics and shifted-factorial series of
/// E_q, S_q and C_q at `points` random (z, q), |z| <= z_max, q in [q_lo, q_hi].
double dual_representation_max_error(int points, std::uint64_t seed, double z_max = 5.0,
                                     double q_lo = 0.5, double q_hi = 0.99);

}  // namespace qdeform
