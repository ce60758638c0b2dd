#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "akm/expr.hpp"

namespace akm {

enum class ManifestKind { Real, Holomorphic, Frame };

const char* to_string(ManifestKind kind);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Lineage {
  std::string parent;
  /// complexify | realify | twin | tower-level-<k>
  std::string transform;
  friend bool operator==(const Lineage&, const Lineage&) = default;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// A chart of a manifold together with its metric.
///
/// `dim` counts real coordinates for Real manifests and complex coordinates
/// for Holomorphic and Frame manifests. `sample_box` holds one interval per
/// real coordinate; for complex kinds that is 2*dim intervals, the real parts
/// of z1..zm followed by their imaginary parts.
struct Manifest {
  std::string name;
  ManifestKind kind = ManifestKind::Real;
  std::size_t dim = 0;
  std::vector<std::string> coords;
  /// Lower triangle: row i holds entries (i, 0..i). Empty for Frame.
  std::vector<std::vector<Expr>> components;
  /// frame[a][mu] is the mu-th component of the a-th holomorphic vector field.
  std::vector<std::vector<Expr>> frame;
  std::vector<Interval> sample_box;
  std::optional<double> expected_gamma;
  std::optional<Signature> expected_signature;
  std::optional<Lineage> lineage;

  bool is_complex() const { return kind != ManifestKind::Real; }
  /// Number of real coordinates.
  std::size_t real_dim() const { return is_complex() ? 2 * dim : dim; }
  /// Symmetric access into the lower-triangle storage.
  const Expr& component(std::size_t i, std::size_t j) const {
    return i >= j ? components[i][j] : components[j][i];
  }

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Checks every structural invariant; throws Schema, DimensionMismatch or
/// HolomorphyViolation.
void validate(const Manifest& m);

Manifest load_manifest(std::string_view json_text);
std::string save_manifest(const Manifest& m);

Manifest load_manifest_file(const std::string& path);
void save_manifest_file(const Manifest& m, const std::string& path);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string content_hash(const Manifest& m);

/// Coordinate names x1..xn style.
std::vector<std::string> numbered(std::string_view prefix, std::size_t n, std::size_t start = 1);

}  // namespace akm
