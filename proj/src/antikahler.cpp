#include "akm/antikahler.hpp"

#include <algorithm>
#include <random>

namespace akm {

namespace {

std::size_t half_dim(std::size_t n) {
  if (n % 2 != 0)
    throw Error(ErrorKind::OddDimension, "dimension " + std::to_string(n) + " is odd");
  return n / 2;
}

}  // namespace

ComplexStructure ComplexStructure::canonical(std::size_t m) {
  Matrix<double> j(2 * m);
  for (std::size_t a = 0; a < m; ++a) {
    j(m + a, a) = 1.0;   // J d_x^a = d_y^a
    j(a, m + a) = -1.0;  // J d_y^a = -d_x^a
  }
  return constant(std::move(j));
}

ComplexStructure ComplexStructure::constant(Matrix<double> j) {
  ComplexStructure cs;
  cs.m_ = half_dim(j.n());
  cs.constant_ = std::move(j);
  return cs;
}

ComplexStructure ComplexStructure::field(std::vector<std::vector<Expr>> entries) {
  ComplexStructure cs;
  cs.m_ = half_dim(entries.size());
  for (const auto& row : entries)
    if (row.size() != entries.size())
      throw Error(ErrorKind::DimensionMismatch, "complex structure must be square");
  cs.entries_ = std::move(entries);
  return cs;
}

JAtPoint ComplexStructure::evaluate(std::span<const double> point) const {
  const std::size_t n = 2 * m_;
  if (point.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "complex structure evaluated at a point of wrong size");
  if (is_constant()) return {constant_, Tensor<double, 3>(n)};
  JAtPoint out{Matrix<double>(n), Tensor<double, 3>(n)};
  auto vars = seed(point);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t rho = 0; rho < n; ++rho) {
      Jet2<double> v = eval_jet2(entries_[mu][rho], std::span<const Jet2<double>>(vars));
      out.j(mu, rho) = v.value();
      for (std::size_t nu = 0; nu < n; ++nu) out.dj(mu, rho, nu) = v.grad(nu);
    }
  return out;
}

double square_residual(const Matrix<double>& j) {
  Matrix<double> sq = j * j;
  for (std::size_t i = 0; i < j.n(); ++i) sq(i, i) += 1.0;
  return max_abs(sq);
}

double anti_hermitian_residual(const Matrix<double>& g, const Matrix<double>& j) {
  Matrix<double> r = transpose(j) * g * j;
  for (std::size_t k = 0; k < r.size(); ++k) r.data()[k] += g.data()[k];
  return max_abs(r) / (1.0 + max_abs(g));
}

namespace {

/// Column A holds the real components of the A-th complex basis vector.
Matrix<cplx> wirtinger_basis(std::size_t m) {
  Matrix<cplx> p(2 * m);
  const cplx half{0.5, 0.0}, ihalf{0.0, 0.5};
  for (std::size_t a = 0; a < m; ++a) {
    p(a, a) = half;
    p(m + a, a) = -ihalf;
    p(a, m + a) = half;
    p(m + a, m + a) = ihalf;
  }
  return p;
}

/// P^T t P for a real symmetric t.
Matrix<cplx> to_complex_basis(const Matrix<cplx>& p, const Matrix<double>& t) {
  const std::size_t n = t.n();
  Matrix<cplx> tc(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) tc(i, k) = t(i, k);
  return transpose(p) * tc * p;
}

}  // namespace

ComplexBlocks complex_components(const Matrix<double>& g) {
  const std::size_t m = half_dim(g.n());
  Matrix<cplx> gc = to_complex_basis(wirtinger_basis(m), g);
  ComplexBlocks out{Matrix<cplx>(m), Matrix<cplx>(m), 0.0};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      out.ghat(a, b) = gc(a, b);
      out.mixed(a, b) = gc(a, m + b);
      out.conj_defect = std::max(out.conj_defect, std::abs(gc(m + a, m + b) - std::conj(gc(a, b))));
    }
  return out;
}

WirtingerMetric wirtinger_metric(const MetricAtPoint<double>& m) {
  const std::size_t n = m.n();
  const Matrix<cplx> p = wirtinger_basis(half_dim(n));
  WirtingerMetric out{to_complex_basis(p, m.g), Tensor<cplx, 3>(n)};
  std::vector<Matrix<cplx>> partial(n);
  for (std::size_t l = 0; l < n; ++l) {
    Matrix<double> d(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) d(a, b) = m.dg(a, b, l);
    partial[l] = to_complex_basis(p, d);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        cplx s{};
        for (std::size_t l = 0; l < n; ++l) s += p(l, c) * partial[l](a, b);
        out.dg(a, b, c) = s;
      }
  return out;
}

double holomorphy_residual(const MetricAtPoint<double>& m) {
  const std::size_t half = half_dim(m.n());
  WirtingerMetric w = wirtinger_metric(m);
  double r = 0.0;
  for (std::size_t a = 0; a < half; ++a)
    for (std::size_t b = 0; b < half; ++b)
      for (std::size_t c = 0; c < half; ++c) r = std::max(r, std::abs(w.dg(a, b, half + c)));
  return r;
}

double holomorphy_residual(const Manifest& real, std::span<const double> point) {
  return holomorphy_residual(evaluate_metric(real, point));
}

double parallel_j_residual(const CurvatureAtPoint<double>& c, const JAtPoint& j) {
  const std::size_t n = c.n();
  double r = 0.0;
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t rho = 0; rho < n; ++rho) {
        double s = j.dj(mu, rho, nu);
        for (std::size_t sg = 0; sg < n; ++sg)
          s += c.gamma(mu, nu, sg) * j.j(sg, rho) - c.gamma(sg, nu, rho) * j.j(mu, sg);
        r = std::max(r, std::abs(s));
      }
  return r;
}

Tensor<cplx, 3> ComplexChristoffel::holomorphic_block() const {
  const std::size_t m = gamma.n() / 2;
  Tensor<cplx, 3> out(m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) out(c, a, b) = gamma(c, a, b);
  return out;
}

ComplexChristoffel complex_christoffel_blocks(const MetricAtPoint<double>& m) {
  const std::size_t n = m.n();
  const std::size_t half = half_dim(n);
  WirtingerMetric w = wirtinger_metric(m);
  Matrix<cplx> gi = checked_inverse(w.g, ErrorKind::SingularMetric, "complexified metric");

  ComplexChristoffel out{Tensor<cplx, 3>(n), 0.0, 0.0};
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        cplx s{};
        for (std::size_t d = 0; d < n; ++d)
          s += gi(c, d) * ((w.dg(b, d, a) + w.dg(a, d, b)) - w.dg(a, b, d));
        out.gamma(c, a, b) = 0.5 * s;
      }

  auto barred = [&](std::size_t k) { return k >= half; };
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        bool pure = barred(a) == barred(b) && barred(b) == barred(c);
        if (!pure) out.forbidden = std::max(out.forbidden, std::abs(out.gamma(c, a, b)));
      }
  for (std::size_t c = 0; c < half; ++c)
    for (std::size_t a = 0; a < half; ++a)
      for (std::size_t b = 0; b < half; ++b)
        out.conj_pattern =
            std::max(out.conj_pattern, std::abs(out.gamma(half + c, half + a, half + b) -
                                                std::conj(out.gamma(c, a, b))));
  return out;
}

ComplexChristoffel complex_christoffel_blocks(const Manifest& real, std::span<const double> point) {
  return complex_christoffel_blocks(evaluate_metric(real, point));
}

double CurvatureIdentityResiduals::max() const {
  return std::max({commutes_with_j, j_invariant, j_linear, ricci_anti_hermitian});
}

namespace {

/// Endomorphism R(X,Y): v -> R^a_bcd v^b X^c Y^d.
Matrix<double> curvature_operator(const Tensor<double, 4>& r, const std::vector<double>& x,
                                  const std::vector<double>& y) {
  const std::size_t n = r.n();
  Matrix<double> out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) s += r(a, b, c, d) * x[c] * y[d];
      out(a, b) = s;
    }
  return out;
}

std::vector<double> act(const Matrix<double>& j, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k) out[i] += j(i, k) * v[k];
  return out;
}

double bilinear(const Matrix<double>& t, const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k) s += t(i, k) * x[i] * y[k];
  return s;
}

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b, double sign) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    r = std::max(r, std::abs(a.data()[k] + sign * b.data()[k]));
  return r;
}

}  // namespace

CurvatureIdentityResiduals curvature_identity_residuals(const CurvatureAtPoint<double>& c,
                                                        const Matrix<double>& j,
                                                        std::size_t trials, std::uint64_t seed) {
  const std::size_t n = c.n();
  half_dim(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double rs = 1.0 + max_abs(c.riemann);
  const double cs = 1.0 + max_abs(c.ricci);

  CurvatureIdentityResiduals out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = unit(rng);
    for (auto& v : y) v = unit(rng);
    auto jx = act(j, x);
    auto jy = act(j, y);

    Matrix<double> rxy = curvature_operator(c.riemann, x, y);
    out.commutes_with_j = std::max(out.commutes_with_j, max_abs_diff(rxy * j, j * rxy, -1.0) / rs);
    out.j_invariant = std::max(
        out.j_invariant, max_abs_diff(rxy, curvature_operator(c.riemann, jx, jy), 1.0) / rs);
    out.j_linear = std::max(
        out.j_linear, max_abs_diff(curvature_operator(c.riemann, jx, y), j * rxy, -1.0) / rs);
    out.ricci_anti_hermitian =
        std::max(out.ricci_anti_hermitian,
                 std::abs(bilinear(c.ricci, jx, jy) + bilinear(c.ricci, x, y)) / cs);
  }
  return out;
}

Matrix<double> realify_block(const Matrix<cplx>& t) {
  const std::size_t m = t.n();
  Matrix<double> out(2 * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      out(a, b) = 2.0 * t(a, b).real();
      out(m + a, m + b) = -2.0 * t(a, b).real();
      out(a, m + b) = -2.0 * t(a, b).imag();
      out(m + a, b) = -2.0 * t(a, b).imag();
    }
  return out;
}

RicciBlockMatch ricci_block_match(const Matrix<double>& real_ricci, const Matrix<cplx>& holo_ricci) {
  if (real_ricci.n() != 2 * holo_ricci.n())
    throw Error(ErrorKind::DimensionMismatch, "real Ricci must have twice the holomorphic dimension");
  RicciBlockMatch out;
  Matrix<double> expected = realify_block(holo_ricci);
  out.difference = max_abs_diff(real_ricci, expected, -1.0);
  out.mixed = max_abs(complex_components(real_ricci).mixed);
  return out;
}

std::vector<cplx> to_complex_point(std::span<const double> xy) {
  const std::size_t m = half_dim(xy.size());
  std::vector<cplx> z(m);
  for (std::size_t a = 0; a < m; ++a) z[a] = {xy[a], xy[m + a]};
  return z;
}

RicciBlockMatch ricci_block_match(const Manifest& real, const Manifest& holo,
                                  std::span<const double> point) {
  auto real_curv = curvature(evaluate_metric(real, point));
  auto z = to_complex_point(point);
  auto holo_curv = curvature(evaluate_metric(holo, std::span<const cplx>(z)));
  return ricci_block_match(real_curv.ricci, holo_curv.ricci);
}

Tensor<double, 3> nijenhuis(const JAtPoint& j) {
  const std::size_t n = j.j.n();
  Tensor<double, 3> out(n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      for (std::size_t rho = 0; rho < n; ++rho) {
        double s = 0.0;
        for (std::size_t sg = 0; sg < n; ++sg)
          s += j.j(sg, nu) * j.dj(mu, rho, sg) - j.j(sg, rho) * j.dj(mu, nu, sg) -
               j.j(mu, sg) * (j.dj(sg, rho, nu) - j.dj(sg, nu, rho));
        out(mu, nu, rho) = s;
      }
  return out;
}

double nijenhuis_residual(const JAtPoint& j) { return max_abs(nijenhuis(j)); }

}  // namespace akm
