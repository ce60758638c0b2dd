#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "akm/error.hpp"
#include "akm/manifest.hpp"

namespace akm {

/// Holomorphic manifest with the same component trees over z1..zn.
/// Imaginary sample directions get half the real width, centered at 0.
/// Throws NonAnalyticComponent if a component uses re() or im().
Manifest complexify(const Manifest& real);

/// Like complexify, but re()/im() are first rewritten through
/// expand_re_im, so realified metrics can be continued again.
Manifest continue_analytically(const Manifest& real, std::string name, Lineage lineage);

/// 2 Re[g_ab dz^a dz^b] on (x1..xm, y1..ym). Frame manifests are first
/// materialized into holomorphic components.
Manifest realify(const Manifest& holo);

/// -2 Im[g_ab dz^a dz^b], i.e. the realification of i*g.
Manifest twin(const Manifest& holo);

/// The holomorphic metric i*g.
Manifest holomorphic_twin(const Manifest& holo);

/// Holomorphic components of a frame manifest, with the frame inverted
/// symbolically by cofactors.
Manifest materialize_frame(const Manifest& frame);

/// Frame manifest; frame[a][mu] = e_a^mu over z1..zm.
Manifest frame_manifest(std::string name, std::size_t m, std::vector<std::vector<Expr>> frame,
                        std::vector<Interval> sample_box);

/// Realification without validation, so non-holomorphic components can be
/// realified on purpose.
Manifest realify_unchecked(const Manifest& holo, std::string name, Lineage lineage);

struct TowerLevel {
  std::size_t level = 0;
  /// Holomorphic seed of this level; empty at level 0.
  std::optional<Manifest> holomorphic;
  Manifest manifest;
};

/// Levels 0..k: level 0 is the input, level j realifies the analytic
/// continuation of level j-1. Throws DimensionLimit unless k >= 1 and
/// 2^k * dim <= 16.
std::vector<TowerLevel> tower(const Manifest& real, std::size_t k);

inline constexpr std::size_t max_real_dim = 16;

}  // namespace akm
