#include "akm/generator.hpp"

#include <functional>

namespace akm {

namespace {

const cplx I{0.0, 1.0};

bool is_value(const Expr& e, double v) { return e.is_const() && e.value() == cplx{v, 0.0}; }

// Products and sums that drop the zeros and ones a cofactor expansion produces.
Expr mul_s(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0) || is_value(b, 0.0)) return Expr::constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  return a * b;
}

Expr add_s(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return a + b;
}

Expr sub_s(const Expr& a, const Expr& b) {
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return -b;
  return a - b;
}

using Square = std::vector<std::vector<Expr>>;

Square minor_of(const Square& a, std::size_t row, std::size_t col) {
  Square out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == row) continue;
    std::vector<Expr> r;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (j != col) r.push_back(a[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

Expr determinant(const Square& a) {
  if (a.size() == 1) return a[0][0];
  Expr det = Expr::constant(0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    Expr term = mul_s(a[0][j], determinant(minor_of(a, 0, j)));
    det = j % 2 == 0 ? add_s(det, term) : sub_s(det, term);
  }
  return det;
}

void require_kind(const Manifest& m, bool complex, const char* op) {
  if (m.is_complex() != complex)
    throw Error(ErrorKind::Schema, std::string(op) + " expects a " +
                                       (complex ? "holomorphic or frame" : "real") +
                                       " manifest, got " + to_string(m.kind));
}

std::vector<Interval> continued_box(const std::vector<Interval>& real_box) {
  std::vector<Interval> box = real_box;
  for (const auto& iv : real_box) {
    double quarter = (iv.hi - iv.lo) / 4.0;
    box.push_back({-quarter, quarter});
  }
  return box;
}

Manifest continue_impl(const Manifest& real, std::string name, Lineage lineage, bool strict) {
  require_kind(real, false, "complexify");
  Manifest out;
  out.name = std::move(name);
  out.kind = ManifestKind::Holomorphic;
  out.dim = real.dim;
  out.coords = numbered("z", real.dim);
  for (std::size_t i = 0; i < real.dim; ++i) {
    std::vector<Expr> row;
    for (std::size_t j = 0; j <= i; ++j) {
      const Expr& c = real.components[i][j];
      if (has_re_im(c)) {
        if (strict)
          throw Error(ErrorKind::NonAnalyticComponent,
                      "component (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") uses re() or im()");
        row.push_back(expand_re_im(c));
      } else {
        row.push_back(c);
      }
    }
    out.components.push_back(std::move(row));
  }
  out.sample_box = continued_box(real.sample_box);
  out.expected_gamma = real.expected_gamma;
  out.lineage = std::move(lineage);
  validate(out);
  return out;
}

/// Block realification of ghat with the three block rules given per entry w.
Manifest realify_blocks(const Manifest& holo, std::string name, Lineage lineage,
                        const std::function<Expr(const Expr&)>& xx,
                        const std::function<Expr(const Expr&)>& yy,
                        const std::function<Expr(const Expr&)>& xy) {
  const std::size_t m = holo.dim;
  std::vector<Expr> zsub;
  for (std::size_t a = 0; a < m; ++a)
    zsub.push_back(Expr::var(a) + Expr::constant(I) * Expr::var(m + a));

  Manifest out;
  out.name = std::move(name);
  out.kind = ManifestKind::Real;
  out.dim = 2 * m;
  out.coords = numbered("x", m);
  for (auto& y : numbered("y", m)) out.coords.push_back(std::move(y));
  out.components.resize(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) out.components[i].resize(i + 1);

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      Expr w = substitute(holo.component(a, b), zsub);
      out.components[a][b] = xx(w);
      out.components[m + a][m + b] = yy(w);
    }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      out.components[m + a][b] = xy(substitute(holo.component(a, b), zsub));

  out.sample_box = holo.sample_box;
  out.expected_signature = Signature{static_cast<int>(m), static_cast<int>(m)};
  out.lineage = std::move(lineage);
  return out;
}

Expr two_re(const Expr& w) { return Expr::constant(2.0) * Expr::re(w); }
Expr two_im(const Expr& w) { return Expr::constant(2.0) * Expr::im(w); }
Expr minus_two_re(const Expr& w) { return Expr::constant(-2.0) * Expr::re(w); }
Expr minus_two_im(const Expr& w) { return Expr::constant(-2.0) * Expr::im(w); }

const Manifest& holomorphic_source(const Manifest& holo, Manifest& storage) {
  if (holo.kind != ManifestKind::Frame) return holo;
  storage = materialize_frame(holo);
  return storage;
}

}  // namespace

Manifest complexify(const Manifest& real) {
  return continue_impl(real, "complexify(" + real.name + ")", Lineage{real.name, "complexify"},
                       true);
}

Manifest continue_analytically(const Manifest& real, std::string name, Lineage lineage) {
  return continue_impl(real, std::move(name), std::move(lineage), false);
}

Manifest realify_unchecked(const Manifest& holo, std::string name, Lineage lineage) {
  require_kind(holo, true, "realify");
  Manifest storage;
  const Manifest& h = holomorphic_source(holo, storage);
  return realify_blocks(h, std::move(name), std::move(lineage), two_re, minus_two_re,
                        minus_two_im);
}

Manifest realify(const Manifest& holo) {
  validate(holo);
  Manifest out = realify_unchecked(holo, "realify(" + holo.name + ")",
                                   Lineage{holo.name, "realify"});
  out.expected_gamma = holo.expected_gamma;
  validate(out);
  return out;
}

Manifest twin(const Manifest& holo) {
  validate(holo);
  require_kind(holo, true, "twin");
  Manifest storage;
  const Manifest& h = holomorphic_source(holo, storage);
  Manifest out = realify_blocks(h, "twin(" + holo.name + ")", Lineage{holo.name, "twin"},
                                minus_two_im, two_im, minus_two_re);
  validate(out);
  return out;
}

Manifest holomorphic_twin(const Manifest& holo) {
  validate(holo);
  require_kind(holo, true, "twin");
  Manifest storage;
  Manifest out = holomorphic_source(holo, storage);
  out.name = "itwin(" + holo.name + ")";
  out.kind = ManifestKind::Holomorphic;
  out.frame.clear();
  for (auto& row : out.components)
    for (auto& c : row) c = Expr::constant(I) * c;
  out.expected_gamma.reset();
  out.lineage = Lineage{holo.name, "twin"};
  validate(out);
  return out;
}

Manifest materialize_frame(const Manifest& frame) {
  if (frame.kind != ManifestKind::Frame)
    throw Error(ErrorKind::Schema, "materialize_frame expects a frame manifest");
  const std::size_t m = frame.dim;
  const Square& e = frame.frame;
  Expr det = determinant(e);
  if (is_value(det, 0.0)) throw Error(ErrorKind::FrameSingular, "frame determinant is zero");

  // f[mu][a] = (E^-1)[mu][a] = cofactor(a, mu) / det
  Square f(m, std::vector<Expr>(m));
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t a = 0; a < m; ++a) {
      Expr cof = m == 1 ? Expr::constant(1.0) : determinant(minor_of(e, a, mu));
      if ((a + mu) % 2 == 1) cof = -cof;
      f[mu][a] = is_value(det, 1.0) ? cof : (is_value(cof, 0.0) ? cof : cof / det);
    }

  Manifest out;
  out.name = frame.name;
  out.kind = ManifestKind::Holomorphic;
  out.dim = m;
  out.coords = frame.coords;
  for (std::size_t mu = 0; mu < m; ++mu) {
    std::vector<Expr> row;
    for (std::size_t nu = 0; nu <= mu; ++nu) {
      Expr s = Expr::constant(0.0);
      for (std::size_t a = 0; a < m; ++a) s = add_s(s, mul_s(f[mu][a], f[nu][a]));
      row.push_back(s);
    }
    out.components.push_back(std::move(row));
  }
  out.sample_box = frame.sample_box;
  out.expected_gamma = frame.expected_gamma;
  out.lineage = frame.lineage;
  validate(out);
  return out;
}

Manifest frame_manifest(std::string name, std::size_t m, std::vector<std::vector<Expr>> frame,
                        std::vector<Interval> sample_box) {
  Manifest out;
  out.name = std::move(name);
  out.kind = ManifestKind::Frame;
  out.dim = m;
  out.coords = numbered("z", m);
  out.frame = std::move(frame);
  out.sample_box = std::move(sample_box);
  validate(out);
  return out;
}

std::vector<TowerLevel> tower(const Manifest& real, std::size_t k) {
  require_kind(real, false, "tower");
  validate(real);
  if (k < 1) throw Error(ErrorKind::DimensionLimit, "tower needs at least one level");
  std::size_t top = real.dim;
  for (std::size_t j = 0; j < k; ++j) {
    top *= 2;
    if (top > max_real_dim)
      throw Error(ErrorKind::DimensionLimit,
                  "tower of " + std::to_string(k) + " levels over dimension " +
                      std::to_string(real.dim) + " exceeds " + std::to_string(max_real_dim));
  }

  std::vector<TowerLevel> levels;
  levels.push_back({0, std::nullopt, real});
  for (std::size_t j = 1; j <= k; ++j) {
    const Manifest& prev = levels.back().manifest;
    const std::string name = real.name + ".level" + std::to_string(j);
    Manifest holo = continue_analytically(prev, name + ".holomorphic",
                                          Lineage{prev.name, "complexify"});
    Manifest next = realify_unchecked(holo, name,
                                      Lineage{prev.name, "tower-level-" + std::to_string(j)});
    next.expected_gamma = real.expected_gamma;
    validate(next);
    levels.push_back({j, std::move(holo), std::move(next)});
  }
  return levels;
}

}  // namespace akm
