#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "akm/manifest.hpp"

namespace akm {

enum class ReportFormat { Json, Text };

struct RunOptions {
  std::size_t points = 64;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::optional<double> gamma_override;
  ReportFormat format = ReportFormat::Json;
  /// Random vector pairs per point for the curvature identities.
  std::size_t trials = 16;
};

struct CheckResult {
  std::string id;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::size_t points = 0;
  std::size_t skipped = 0;
  /// More than the allowed fraction of points failed to evaluate.
  bool over_skip_budget = false;
  std::optional<double> gamma_hat;
  std::optional<Signature> signature;
};

struct Report {
  std::string manifest_name;
  std::string manifest_hash;
  RunOptions options;
  std::vector<CheckResult> checks;
  bool pass = false;

  const CheckResult* find(const std::string& id) const;
};

/// Fraction of points a check may skip before it fails.
inline constexpr double skip_budget = 0.2;

/// Points drawn uniformly from the sample box. Coordinate c of point k
/// depends only on (seed, k, c).
std::vector<std::vector<double>> sample_points(const Manifest& man, std::size_t count,
                                               std::uint64_t seed);

/// True for lineages produced by realify, twin or tower.
bool has_anti_kahler_lineage(const Manifest& man);

Report run_verify(const Manifest& man, const RunOptions& opts);

std::string report_json(const Report& r);
std::string report_text(const Report& r);

/// 0 pass, 1 check failure, 3 a check ran over its skip budget.
int exit_code(const Report& r);

}  // namespace akm
