#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "akm/geometry.hpp"
#include "akm/manifest.hpp"

namespace akm {

/// J and its first derivatives at a point.
///   j(mu, rho) = J^mu_rho, dj(mu, rho, nu) = d_nu J^mu_rho
struct JAtPoint {
  Matrix<double> j;
  Tensor<double, 3> dj;
};

/// Almost-complex structure on 2m real coordinates ordered (x1..xm, y1..ym).
class ComplexStructure {
 public:
  /// J(d/dx^a) = d/dy^a, J(d/dy^a) = -d/dx^a.
  static ComplexStructure canonical(std::size_t m);
  static ComplexStructure constant(Matrix<double> j);
  /// Position-dependent J; entries[mu][rho] = J^mu_rho as real expressions.
  static ComplexStructure field(std::vector<std::vector<Expr>> entries);

  std::size_t m() const { return m_; }
  bool is_constant() const { return entries_.empty(); }
  JAtPoint evaluate(std::span<const double> point) const;

 private:
  std::size_t m_ = 0;
  Matrix<double> constant_;
  std::vector<std::vector<Expr>> entries_;
};

/// max |J^2 + I|
double square_residual(const Matrix<double>& j);

/// max |J^T g J + g| / (1 + max |g|)
double anti_hermitian_residual(const Matrix<double>& g, const Matrix<double>& j);

/// Components of a real metric in the complex coordinate basis
/// d/dz^a = (d/dx^a - i d/dy^a)/2.
struct ComplexBlocks {
  Matrix<cplx> ghat;   // g(d_a, d_b)
  Matrix<cplx> mixed;  // g(d_a, d_bbar)
  double conj_defect = 0.0;  // max |g(d_abar, d_bbar) - conj g(d_a, d_b)|
};

ComplexBlocks complex_components(const Matrix<double>& g);

/// A real tensor field rewritten in the basis (d_z1..d_zm, d_zbar1..d_zbarm),
/// with Wirtinger derivatives dg(A, B, C) = d_C g_AB.
struct WirtingerMetric {
  Matrix<cplx> g;
  Tensor<cplx, 3> dg;
};

WirtingerMetric wirtinger_metric(const MetricAtPoint<double>& m);

/// max over a, b, c of |d_{zbar^c} ghat_ab|.
double holomorphy_residual(const MetricAtPoint<double>& m);
double holomorphy_residual(const Manifest& real, std::span<const double> point);

/// max |nabla_nu J^mu_rho|
double parallel_j_residual(const CurvatureAtPoint<double>& c, const JAtPoint& j);

/// Christoffel symbols of the complexified Levi-Civita connection,
/// gamma(C, A, B) = Gamma^C_AB over the 2m complex basis directions.
struct ComplexChristoffel {
  Tensor<cplx, 3> gamma;
  /// max |Gamma| over index patterns that mix barred and unbarred indices
  double forbidden = 0.0;
  /// max |Gamma^cbar_abar bbar - conj Gamma^c_ab|
  double conj_pattern = 0.0;
  /// Gamma^c_ab, the holomorphic block
  Tensor<cplx, 3> holomorphic_block() const;
};

ComplexChristoffel complex_christoffel_blocks(const MetricAtPoint<double>& m);
ComplexChristoffel complex_christoffel_blocks(const Manifest& real, std::span<const double> point);

/// Curvature identities of anti-Kaehler metrics over random vector pairs:
///   R(X,Y) J = J R(X,Y), R(X,Y) = -R(JX,JY), R(JX,Y) = J R(X,Y),
///   Ric(JX,JY) = -Ric(X,Y).
struct CurvatureIdentityResiduals {
  double commutes_with_j = 0.0;
  double j_invariant = 0.0;
  double j_linear = 0.0;
  double ricci_anti_hermitian = 0.0;

  double max() const;
};

CurvatureIdentityResiduals curvature_identity_residuals(const CurvatureAtPoint<double>& c,
                                                        const Matrix<double>& j,
                                                        std::size_t trials, std::uint64_t seed);

/// Real symmetric 2-tensor with the components of 2 Re[t_ab dz^a dz^b].
Matrix<double> realify_block(const Matrix<cplx>& t);

struct RicciBlockMatch {
  /// max |Ric(real) - realify_block(Ric(holomorphic))|
  double difference = 0.0;
  /// max |Ric(real)(d_a, d_bbar)|
  double mixed = 0.0;
};

RicciBlockMatch ricci_block_match(const Matrix<double>& real_ricci, const Matrix<cplx>& holo_ricci);
/// Real metric at (x, y) against the holomorphic one at z = x + i y.
RicciBlockMatch ricci_block_match(const Manifest& real, const Manifest& holo,
                                  std::span<const double> point);

/// N(mu, nu, rho) = N^mu_{nu rho}
Tensor<double, 3> nijenhuis(const JAtPoint& j);
double nijenhuis_residual(const JAtPoint& j);

/// Complex point z = x + i y from real coordinates (x1..xm, y1..ym).
std::vector<cplx> to_complex_point(std::span<const double> xy);

}  // namespace akm
