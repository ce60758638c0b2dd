#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "akm/error.hpp"
#include "akm/expr.hpp"

namespace akm {

template <class S>
inline constexpr bool is_complex_v = !std::is_floating_point_v<S>;

/// Second-order Taylor jet of a scalar function of n variables.
///
/// The Hessian is stored densely and every operation fills the lower triangle
/// and mirrors it, so hess(i, j) == hess(j, i) holds bitwise.
template <class S>
class Jet2 {
 public:
  Jet2() = default;
  Jet2(std::size_t n, S value) : value_(value), grad_(n, S{}), hess_(n * n, S{}) {}

  static Jet2 variable(std::size_t n, std::size_t j, S value) {
    Jet2 r(n, value);
    r.grad_[j] = S{1};
    return r;
  }

  std::size_t n() const { return grad_.size(); }
  S value() const { return value_; }
  S grad(std::size_t i) const { return grad_[i]; }
  S hess(std::size_t i, std::size_t j) const { return hess_[i * n() + j]; }
  std::span<const S> grad() const { return grad_; }

  void set_value(S v) { value_ = v; }
  void set_grad(std::size_t i, S v) { grad_[i] = v; }
  /// Sets both (i, j) and (j, i).
  void set_hess(std::size_t i, std::size_t j, S v) {
    hess_[i * n() + j] = v;
    hess_[j * n() + i] = v;
  }

  Jet2& operator+=(const Jet2& b) {
    value_ += b.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += b.grad_[i];
    for (std::size_t k = 0; k < hess_.size(); ++k) hess_[k] += b.hess_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& b) {
    value_ -= b.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= b.grad_[i];
    for (std::size_t k = 0; k < hess_.size(); ++k) hess_[k] -= b.hess_[k];
    return *this;
  }
  Jet2& operator*=(S c) {
    value_ *= c;
    for (auto& g : grad_) g *= c;
    for (auto& h : hess_) h *= c;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator-(Jet2 a) { return a *= S{-1}; }
  friend Jet2 operator*(Jet2 a, S c) { return a *= c; }
  friend Jet2 operator*(S c, Jet2 a) { return a *= c; }
  friend Jet2 operator+(Jet2 a, S c) {
    a.value_ += c;
    return a;
  }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    const std::size_t n = a.n();
    Jet2 r(n, a.value_ * b.value_);
    for (std::size_t i = 0; i < n; ++i) r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        S h = a.hess(i, j) * b.value_ + a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i] +
              a.value_ * b.hess(i, j);
        r.set_hess(i, j, h);
      }
    }
    return r;
  }

  /// f(a) from f(a0), f'(a0), f''(a0).
  Jet2 compose(S f, S df, S d2f) const {
    const std::size_t n = this->n();
    Jet2 r(n, f);
    for (std::size_t i = 0; i < n; ++i) r.grad_[i] = df * grad_[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        r.set_hess(i, j, d2f * grad_[i] * grad_[j] + df * hess(i, j));
    return r;
  }

  /// Componentwise map of value, gradient and Hessian (used for re/im).
  template <class T, class F>
  Jet2<T> map(F f) const {
    Jet2<T> r(n(), f(value_));
    for (std::size_t i = 0; i < n(); ++i) r.set_grad(i, f(grad_[i]));
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j <= i; ++j) r.set_hess(i, j, f(hess(i, j)));
    return r;
  }

 private:
  S value_{};
  std::vector<S> grad_;
  std::vector<S> hess_;
};

/// Jets of the coordinate functions at a point.
template <class S>
std::vector<Jet2<S>> seed(std::span<const S> point) {
  std::vector<Jet2<S>> out;
  out.reserve(point.size());
  for (std::size_t j = 0; j < point.size(); ++j)
    out.push_back(Jet2<S>::variable(point.size(), j, point[j]));
  return out;
}

/// Exact integer power by repeated squaring (no log/exp, no branch cut).
template <class S>
S ipow(S base, int n) {
  bool invert = n < 0;
  unsigned long long k = invert ? -static_cast<long long>(n) : n;
  S result{1};
  while (k) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return invert ? S{1} / result : result;
}

template <class S>
Jet2<S> reciprocal(const Jet2<S>& b) {
  S v = b.value();
  if (!(std::abs(v) > 1e-300)) throw Error(ErrorKind::DivisionNearZero, "division by zero");
  S inv = S{1} / v;
  return b.compose(inv, -inv * inv, S{2} * inv * inv * inv);
}

template <class S>
Jet2<S> operator/(const Jet2<S>& a, const Jet2<S>& b) {
  return a * reciprocal(b);
}

template <class S>
Jet2<S> pow_int(const Jet2<S>& a, int n) {
  S v = a.value();
  if (n == 0) return Jet2<S>(a.n(), S{1});
  if (n == 1) return a;
  if (n < 0 && !(std::abs(v) > 1e-300))
    throw Error(ErrorKind::DivisionNearZero, "negative power of zero");
  S nn = static_cast<double>(n);
  return a.compose(ipow(v, n), nn * ipow(v, n - 1), nn * (nn - S{1}) * ipow(v, n - 2));
}

namespace detail {

template <class S>
bool on_cut(S v) {
  if constexpr (is_complex_v<S>)
    return v.imag() == 0.0 && v.real() <= 0.0;
  else
    return v <= 0.0;
}

}  // namespace detail

/// Principal-branch elementary functions. Arguments on a branch cut (or at
/// the sqrt branch point) throw instead of producing NaN.
template <class S>
Jet2<S> apply_fn(Fn f, const Jet2<S>& a) {
  using std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt;
  S v = a.value();
  switch (f) {
    case Fn::Sqrt: {
      if (detail::on_cut(v))
        throw Error(ErrorKind::BranchCutViolation, "sqrt argument on the branch cut");
      S s = sqrt(v);
      return a.compose(s, S{0.5} / s, S{-0.25} / (s * v));
    }
    case Fn::Exp: {
      S e = exp(v);
      return a.compose(e, e, e);
    }
    case Fn::Log: {
      if (detail::on_cut(v))
        throw Error(ErrorKind::BranchCutViolation, "log argument on the branch cut");
      return a.compose(log(v), S{1} / v, S{-1} / (v * v));
    }
    case Fn::Sin: return a.compose(sin(v), cos(v), -sin(v));
    case Fn::Cos: return a.compose(cos(v), -sin(v), -cos(v));
    case Fn::Sinh: return a.compose(sinh(v), cosh(v), sinh(v));
    case Fn::Cosh: return a.compose(cosh(v), sinh(v), cosh(v));
  }
  return a;
}

/// Evaluates an expression over real coordinates. Constants must be real
/// outside re/im; the argument of re/im is evaluated over complex scalars with
/// real differentiation directions and projected componentwise.
Jet2<double> eval_jet2(const Expr& e, std::span<const Jet2<double>> vars);
Jet2<double> eval_jet2(const Expr& e, std::span<const double> point);

/// Evaluates a holomorphic expression over complex coordinates; derivatives
/// are complex (holomorphic) derivatives. re/im nodes are rejected.
Jet2<cplx> eval_jet2(const Expr& e, std::span<const Jet2<cplx>> vars);
Jet2<cplx> eval_jet2(const Expr& e, std::span<const cplx> point);

}  // namespace akm
