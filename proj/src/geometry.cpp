#include "akm/geometry.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace akm {

template <class S>
MetricAtPoint<S> metric_from_jets(const std::vector<std::vector<Jet2<S>>>& lower,
                                  std::vector<S> point) {
  const std::size_t n = lower.size();
  MetricAtPoint<S> m{std::move(point), Matrix<S>(n), Tensor<S, 3>(n), Tensor<S, 4>(n)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const Jet2<S>& j = lower[a][b];
      m.g(a, b) = m.g(b, a) = j.value();
      for (std::size_t c = 0; c < n; ++c) {
        m.dg(a, b, c) = m.dg(b, a, c) = j.grad(c);
        for (std::size_t d = 0; d < n; ++d) m.ddg(a, b, c, d) = m.ddg(b, a, c, d) = j.hess(c, d);
      }
    }
  }
  return m;
}

namespace {

void check_point(const Manifest& man, std::size_t size) {
  if (size != man.dim)
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(size) +
                                                  " coordinates, manifest '" + man.name +
                                                  "' has " + std::to_string(man.dim));
}

template <class S>
std::vector<std::vector<Jet2<S>>> component_jets(const Manifest& man, std::span<const S> point) {
  auto vars = seed(point);
  std::vector<std::vector<Jet2<S>>> lower(man.dim);
  for (std::size_t a = 0; a < man.dim; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      lower[a].push_back(eval_jet2(man.components[a][b], std::span<const Jet2<S>>(vars)));
  return lower;
}

}  // namespace

MetricAtPoint<double> evaluate_metric(const Manifest& man, std::span<const double> point) {
  if (man.kind != ManifestKind::Real)
    throw Error(ErrorKind::DimensionMismatch,
                "manifest '" + man.name + "' is complex; evaluate it at a complex point");
  check_point(man, point.size());
  return metric_from_jets(component_jets(man, point), {point.begin(), point.end()});
}

MetricAtPoint<cplx> evaluate_metric(const Manifest& man, std::span<const cplx> point) {
  if (man.kind == ManifestKind::Real)
    throw Error(ErrorKind::DimensionMismatch,
                "manifest '" + man.name + "' is real; evaluate it at a real point");
  check_point(man, point.size());
  if (man.kind == ManifestKind::Holomorphic)
    return metric_from_jets(component_jets(man, point), {point.begin(), point.end()});

  auto vars = seed(point);
  std::vector<std::vector<Jet2<cplx>>> frame(man.dim);
  for (std::size_t a = 0; a < man.dim; ++a)
    for (std::size_t mu = 0; mu < man.dim; ++mu)
      frame[a].push_back(eval_jet2(man.frame[a][mu], std::span<const Jet2<cplx>>(vars)));
  return frame_metric(frame, {point.begin(), point.end()});
}

MetricAtPoint<cplx> frame_metric(const std::vector<std::vector<Jet2<cplx>>>& frame,
                                 std::vector<cplx> point) {
  const std::size_t m = frame.size();
  Matrix<cplx> e(m);
  std::vector<Matrix<cplx>> de(m, Matrix<cplx>(m));
  std::vector<Matrix<cplx>> dde(m * m, Matrix<cplx>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t mu = 0; mu < m; ++mu) {
      const auto& j = frame[a][mu];
      e(a, mu) = j.value();
      for (std::size_t c = 0; c < m; ++c) {
        de[c](a, mu) = j.grad(c);
        for (std::size_t d = 0; d < m; ++d) dde[c * m + d](a, mu) = j.hess(c, d);
      }
    }

  // F = E^-1, dF = -F dE F, ddF = -F ddE F + F dE_c F dE_d F + F dE_d F dE_c F
  Matrix<cplx> f = checked_inverse(e, ErrorKind::FrameSingular, "frame");
  std::vector<Matrix<cplx>> df(m);
  for (std::size_t c = 0; c < m; ++c) {
    df[c] = f * de[c] * f;
    for (auto* p = df[c].data(); p != df[c].data() + df[c].size(); ++p) *p = -*p;
  }
  std::vector<Matrix<cplx>> ddf(m * m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t d = 0; d <= c; ++d) {
      Matrix<cplx> t1 = f * dde[c * m + d] * f;
      Matrix<cplx> t2 = f * de[c] * f * de[d] * f;
      Matrix<cplx> t3 = f * de[d] * f * de[c] * f;
      Matrix<cplx> r(m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) r(i, k) = -t1(i, k) + (t2(i, k) + t3(i, k));
      ddf[c * m + d] = r;
      ddf[d * m + c] = r;
    }

  MetricAtPoint<cplx> out{std::move(point), Matrix<cplx>(m), Tensor<cplx, 3>(m),
                          Tensor<cplx, 4>(m)};
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu <= mu; ++nu) {
      cplx g{};
      for (std::size_t a = 0; a < m; ++a) g += f(mu, a) * f(nu, a);
      out.g(mu, nu) = out.g(nu, mu) = g;
      for (std::size_t c = 0; c < m; ++c) {
        cplx dg{};
        for (std::size_t a = 0; a < m; ++a) dg += df[c](mu, a) * f(nu, a) + f(mu, a) * df[c](nu, a);
        out.dg(mu, nu, c) = out.dg(nu, mu, c) = dg;
      }
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d <= c; ++d) {
          const auto& fcd = ddf[c * m + d];
          cplx h{};
          for (std::size_t a = 0; a < m; ++a)
            h += (fcd(mu, a) * f(nu, a) + f(mu, a) * fcd(nu, a)) +
                 (df[c](mu, a) * df[d](nu, a) + df[d](mu, a) * df[c](nu, a));
          out.ddg(mu, nu, c, d) = out.ddg(nu, mu, c, d) = h;
          out.ddg(mu, nu, d, c) = out.ddg(nu, mu, d, c) = h;
        }
    }
  return out;
}

template <class S>
Christoffel<S> christoffel(const MetricAtPoint<S>& m) {
  const std::size_t n = m.n();
  Christoffel<S> out{checked_inverse(m.g, ErrorKind::SingularMetric, "metric"), Tensor<S, 3>(n),
                     Tensor<S, 4>(n)};
  const auto& gi = out.ginv;

  // first kind: low(d,b,c) = 1/2 (d_b g_cd + d_c g_bd - d_d g_bc)
  Tensor<S, 3> low(n);
  Tensor<S, 4> dlow(n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        low(d, b, c) = S{0.5} * ((m.dg(c, d, b) + m.dg(b, d, c)) - m.dg(b, c, d));
        for (std::size_t e = 0; e < n; ++e)
          dlow(d, b, c, e) =
              S{0.5} * ((m.ddg(c, d, b, e) + m.ddg(b, d, c, e)) - m.ddg(b, c, d, e));
      }

  // d_e g^{ad} = -g^{ap} d_e g_pq g^{qd}
  Tensor<S, 3> dginv(n);
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t d = 0; d < n; ++d) {
        S s{};
        for (std::size_t p = 0; p < n; ++p) {
          if (gi(a, p) == S{}) continue;
          S t{};
          for (std::size_t q = 0; q < n; ++q) t += m.dg(p, q, e) * gi(q, d);
          s += gi(a, p) * t;
        }
        dginv(a, d, e) = -s;
      }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        S s{};
        for (std::size_t d = 0; d < n; ++d) s += gi(a, d) * low(d, b, c);
        out.gamma(a, b, c) = s;
        for (std::size_t e = 0; e < n; ++e) {
          S t{};
          for (std::size_t d = 0; d < n; ++d) t += dginv(a, d, e) * low(d, b, c) + gi(a, d) * dlow(d, b, c, e);
          out.dgamma(a, b, c, e) = t;
        }
      }
  return out;
}

template <class S>
Tensor<S, 4> riemann(const Tensor<S, 3>& gamma, const Tensor<S, 4>& dgamma) {
  const std::size_t n = gamma.n();
  Tensor<S, 4> r(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          S quad{};
          for (std::size_t e = 0; e < n; ++e)
            quad += gamma(a, e, c) * gamma(e, b, d) - gamma(a, e, d) * gamma(e, b, c);
          r(a, b, c, d) = (dgamma(a, b, d, c) - dgamma(a, b, c, d)) + quad;
        }
  return r;
}

template <class S>
Matrix<S> ricci(const Tensor<S, 4>& riem) {
  const std::size_t n = riem.n();
  Matrix<S> ric(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      S s{};
      for (std::size_t c = 0; c < n; ++c) s += riem(c, a, c, b);
      ric(a, b) = s;
    }
  return ric;
}

template <class S>
S scalar_curvature(const Matrix<S>& ric, const Matrix<S>& ginv) {
  S s{};
  for (std::size_t a = 0; a < ric.n(); ++a)
    for (std::size_t b = 0; b < ric.n(); ++b) s += ginv(a, b) * ric(a, b);
  return s;
}

template <class S>
CurvatureAtPoint<S> curvature(const MetricAtPoint<S>& m) {
  Christoffel<S> ch = christoffel(m);
  CurvatureAtPoint<S> c;
  c.metric = m;
  c.ginv = std::move(ch.ginv);
  c.gamma = std::move(ch.gamma);
  c.dgamma = std::move(ch.dgamma);
  c.riemann = riemann(c.gamma, c.dgamma);
  c.ricci = ricci(c.riemann);
  c.scalar = scalar_curvature(c.ricci, c.ginv);
  return c;
}

template <class S>
Tensor<S, 4> lower_riemann(const Tensor<S, 4>& riem, const Matrix<S>& g) {
  const std::size_t n = riem.n();
  Tensor<S, 4> low(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          S s{};
          for (std::size_t e = 0; e < n; ++e) s += g(a, e) * riem(e, b, c, d);
          low(a, b, c, d) = s;
        }
  return low;
}

template <class S>
EinsteinFit einstein_fit(const Matrix<S>& ric, const Matrix<S>& g) {
  S num{};
  double den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if constexpr (is_complex_v<S>)
      num += ric.data()[k] * std::conj(g.data()[k]);
    else
      num += ric.data()[k] * g.data()[k];
    den += std::norm(g.data()[k]);
  }
  EinsteinFit fit;
  if (den > 0.0) {
    if constexpr (is_complex_v<S>)
      fit.gamma_hat = (num / den).real();
    else
      fit.gamma_hat = num / den;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    worst = std::max(worst, static_cast<double>(std::abs(ric.data()[k] - S(fit.gamma_hat) * g.data()[k])));
  fit.residual = worst / (1.0 + max_abs(g));
  return fit;
}

Signature signature(const Matrix<double>& g, double tol) {
  const std::size_t n = g.n();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (g(i, j) + g(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  double largest = ev.cwiseAbs().maxCoeff();
  Signature s;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (!(std::abs(ev[k]) >= tol * largest) || largest == 0.0)
      throw Error(ErrorKind::NearNullEigenvalue,
                  "eigenvalue " + std::to_string(ev[k]) + " is negligible; signature is ill-determined");
    (ev[k] > 0 ? s.positive : s.negative)++;
  }
  return s;
}

double SymmetryResiduals::max() const {
  return std::max({antisymmetry, first_bianchi, pair_symmetry, lowered_antisymmetry, ricci_symmetry});
}

template <class S>
SymmetryResiduals symmetry_residuals(const CurvatureAtPoint<S>& c) {
  const std::size_t n = c.n();
  const auto& r = c.riemann;
  Tensor<S, 4> low = lower_riemann(r, c.metric.g);
  const double rs = 1.0 + max_abs(r);
  const double ls = 1.0 + max_abs(low);
  SymmetryResiduals out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t d = 0; d < n; ++d) {
          out.antisymmetry = std::max(out.antisymmetry, std::abs(r(a, b, cc, d) + r(a, b, d, cc)) / rs);
          out.first_bianchi = std::max(
              out.first_bianchi, std::abs(r(a, b, cc, d) + r(a, cc, d, b) + r(a, d, b, cc)) / rs);
          out.pair_symmetry = std::max(out.pair_symmetry, std::abs(low(a, b, cc, d) - low(cc, d, a, b)) / ls);
          out.lowered_antisymmetry =
              std::max(out.lowered_antisymmetry, std::abs(low(a, b, cc, d) + low(b, a, cc, d)) / ls);
        }
  const double cs = 1.0 + max_abs(c.ricci);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out.ricci_symmetry = std::max(out.ricci_symmetry, std::abs(c.ricci(a, b) - c.ricci(b, a)) / cs);
  return out;
}

#define AKM_INSTANTIATE(S)                                                                       \
  template MetricAtPoint<S> metric_from_jets(const std::vector<std::vector<Jet2<S>>>&,           \
                                             std::vector<S>);                                    \
  template Christoffel<S> christoffel(const MetricAtPoint<S>&);                                  \
  template Tensor<S, 4> riemann(const Tensor<S, 3>&, const Tensor<S, 4>&);                       \
  template Matrix<S> ricci(const Tensor<S, 4>&);                                                 \
  template S scalar_curvature(const Matrix<S>&, const Matrix<S>&);                               \
  template CurvatureAtPoint<S> curvature(const MetricAtPoint<S>&);                               \
  template Tensor<S, 4> lower_riemann(const Tensor<S, 4>&, const Matrix<S>&);                    \
  template EinsteinFit einstein_fit(const Matrix<S>&, const Matrix<S>&);                         \
  template SymmetryResiduals symmetry_residuals(const CurvatureAtPoint<S>&);

AKM_INSTANTIATE(double)
AKM_INSTANTIATE(cplx)
#undef AKM_INSTANTIATE

}  // namespace akm
