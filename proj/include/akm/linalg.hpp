#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "akm/error.hpp"

namespace akm {

/// Dense tensor with every index running over the same range [0, n).
template <class S, int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::size_t n, S fill = S{}) : n_(n), data_(size_for(n), fill) {}

  std::size_t n() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  S& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }
  template <class... I>
  const S& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }

  S* data() { return data_.data(); }
  const S* data() const { return data_.data(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  static std::size_t size_for(std::size_t n) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= n;
    return s;
  }
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * n_ + idx), ...);
    return off;
  }

  std::size_t n_ = 0;
  std::vector<S> data_;
};

template <class S>
using Matrix = Tensor<S, 2>;

template <class S, int R>
double max_abs(const Tensor<S, R>& t) {
  double m = 0.0;
  for (const auto& v : t) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

template <class S>
Matrix<S> identity(std::size_t n) {
  Matrix<S> I(n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = S{1};
  return I;
}

template <class S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
  const std::size_t n = a.n();
  Matrix<S> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      S aik = a(i, k);
      if (aik == S{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class S>
Matrix<S> transpose(const Matrix<S>& a) {
  Matrix<S> t(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) t(j, i) = a(i, j);
  return t;
}

/// LU factorization with partial pivoting over real or complex scalars.
template <class S>
class Lu {
 public:
  explicit Lu(Matrix<S> a) : lu_(std::move(a)), perm_(lu_.n()) {
    const std::size_t n = lu_.n();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    max_row_norm_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += std::norm(lu_(i, j));
      max_row_norm_ = std::max(max_row_norm_, std::sqrt(s));
    }
    det_ = S{1};
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        det_ = -det_;
      }
      S pivot = lu_(k, k);
      det_ *= pivot;
      if (pivot == S{}) continue;
      for (std::size_t i = k + 1; i < n; ++i) {
        S f = lu_(i, k) / pivot;
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  S determinant() const { return det_; }

  /// |det| below 1e-12 times (max row norm)^n.
  bool singular(double rel = 1e-12) const {
    double scale = std::pow(max_row_norm_, static_cast<double>(lu_.n()));
    return !(std::abs(det_) >= rel * scale) || max_row_norm_ == 0.0;
  }

  std::vector<S> solve(const std::vector<S>& b) const {
    const std::size_t n = lu_.n();
    std::vector<S> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      S s = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      S s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

  Matrix<S> inverse() const {
    const std::size_t n = lu_.n();
    Matrix<S> inv(n);
    std::vector<S> e(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::fill(e.begin(), e.end(), S{});
      e[c] = S{1};
      auto col = solve(e);
      for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
  }

 private:
  Matrix<S> lu_;
  std::vector<std::size_t> perm_;
  S det_{};
  double max_row_norm_ = 0.0;
};

/// Inverse of a matrix that must be well conditioned; throws `kind` otherwise.
template <class S>
Matrix<S> checked_inverse(const Matrix<S>& a, ErrorKind kind, const char* what) {
  Lu<S> lu(a);
  if (lu.singular()) throw Error(kind, std::string(what) + " is singular at this point");
  return lu.inverse();
}

}  // namespace akm
