#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "akm/jets.hpp"
#include "akm/linalg.hpp"
#include "akm/manifest.hpp"

namespace akm {

/// Metric with first and second partial derivatives at one point.
///   g(a,b), dg(a,b,c) = d_c g_ab, ddg(a,b,c,d) = d_c d_d g_ab
template <class S>
struct MetricAtPoint {
  std::vector<S> point;
  Matrix<S> g;
  Tensor<S, 3> dg;
  Tensor<S, 4> ddg;

  std::size_t n() const { return g.n(); }
};

/// gamma(a,b,c) = Gamma^a_bc, dgamma(a,b,c,d) = d_d Gamma^a_bc.
template <class S>
struct Christoffel {
  Matrix<S> ginv;
  Tensor<S, 3> gamma;
  Tensor<S, 4> dgamma;
};

/// riemann(a,b,c,d) = R^a_bcd, ricci(a,b) = R^c_acb.
template <class S>
struct CurvatureAtPoint {
  MetricAtPoint<S> metric;
  Matrix<S> ginv;
  Tensor<S, 3> gamma;
  Tensor<S, 4> dgamma;
  Tensor<S, 4> riemann;
  Matrix<S> ricci;
  S scalar{};

  std::size_t n() const { return metric.n(); }
};

struct EinsteinFit {
  double gamma_hat = 0.0;
  /// max |Ric - gamma_hat g| / (1 + max |g|)
  double residual = 0.0;
};

/// Assembles a MetricAtPoint from jets of the lower-triangle components.
template <class S>
MetricAtPoint<S> metric_from_jets(const std::vector<std::vector<Jet2<S>>>& lower,
                                  std::vector<S> point);

/// Real manifests at a real point.
MetricAtPoint<double> evaluate_metric(const Manifest& man, std::span<const double> point);
/// Holomorphic and frame manifests at a complex point; derivatives are
/// holomorphic. Frame manifests invert the frame per point.
MetricAtPoint<cplx> evaluate_metric(const Manifest& man, std::span<const cplx> point);

/// Metric g_{mu nu} = sum_a F_{mu a} F_{nu a} with F the inverse of the frame
/// matrix E (E(a, mu) = e_a^mu), from jets of E.
MetricAtPoint<cplx> frame_metric(const std::vector<std::vector<Jet2<cplx>>>& frame,
                                 std::vector<cplx> point);

template <class S>
Christoffel<S> christoffel(const MetricAtPoint<S>& m);

template <class S>
Tensor<S, 4> riemann(const Tensor<S, 3>& gamma, const Tensor<S, 4>& dgamma);

template <class S>
Matrix<S> ricci(const Tensor<S, 4>& riem);

template <class S>
S scalar_curvature(const Matrix<S>& ric, const Matrix<S>& ginv);

template <class S>
CurvatureAtPoint<S> curvature(const MetricAtPoint<S>& m);

/// R_abcd = g_ae R^e_bcd.
template <class S>
Tensor<S, 4> lower_riemann(const Tensor<S, 4>& riem, const Matrix<S>& g);

template <class S>
EinsteinFit einstein_fit(const Matrix<S>& ric, const Matrix<S>& g);

/// Counts of positive and negative eigenvalues of a real symmetric matrix.
/// Throws NearNullEigenvalue if some |lambda| < tol * max |lambda|.
Signature signature(const Matrix<double>& g, double tol = 1e-10);

/// Structural identities of the curvature, each normalized by
/// (1 + max |tensor|).
struct SymmetryResiduals {
  double antisymmetry = 0.0;         // R^a_bcd + R^a_bdc
  double first_bianchi = 0.0;        // R^a_bcd + R^a_cdb + R^a_dbc
  double pair_symmetry = 0.0;        // R_abcd - R_cdab
  double lowered_antisymmetry = 0.0; // R_abcd + R_bacd
  double ricci_symmetry = 0.0;       // R_ab - R_ba

  double max() const;
};

template <class S>
SymmetryResiduals symmetry_residuals(const CurvatureAtPoint<S>& c);

}  // namespace akm
