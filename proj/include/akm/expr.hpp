#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace akm {

using cplx = std::complex<double>;

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, PowInt, Func, Re, Im };

enum class Fn { Sqrt, Exp, Log, Sin, Cos, Sinh, Cosh };

const char* fn_name(Fn f);

/// Immutable expression tree over indexed coordinates.
///
/// Nodes are only created through the factories below, which fold binary and
/// unary arithmetic whose operands are all constants. The parser uses the same
/// factories, so every tree is in folded form and format/parse round-trips to
/// a structurally equal tree.
class Expr {
 public:
  Expr();  // Const 0

  static Expr constant(cplx c);
  static Expr var(std::size_t index);
  static Expr neg(Expr e);
  static Expr add(Expr l, Expr r);
  static Expr sub(Expr l, Expr r);
  static Expr mul(Expr l, Expr r);
  static Expr div(Expr l, Expr r);
  static Expr pow_int(Expr base, int exponent);
  static Expr func(Fn f, Expr e);
  static Expr re(Expr e);
  static Expr im(Expr e);

  Op op() const;
  /// Const only.
  cplx value() const;
  /// Var only.
  std::size_t index() const;
  /// PowInt only.
  int exponent() const;
  /// Func only.
  Fn fn() const;
  /// Single child of Neg, PowInt, Func, Re, Im; left child of binaries.
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_const() const { return op() == Op::Const; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

Expr parse(std::string_view text, std::span<const std::string> coords);
std::string format(const Expr& e, std::span<const std::string> coords);

/// True when the tree contains a re() or im() node.
bool has_re_im(const Expr& e);
/// True when some constant has a nonzero imaginary part.
bool has_complex_constant(const Expr& e);
/// Largest variable index plus one (0 for constant trees).
std::size_t var_bound(const Expr& e);
std::size_t node_count(const Expr& e);

/// Replaces Var(k) by replacement[k].
Expr substitute(const Expr& e, std::span<const Expr> replacement);
/// Conjugates every constant. For real arguments of a tree without re/im this
/// evaluates to the complex conjugate of the original tree.
Expr conjugate_constants(const Expr& e);
/// Rewrites re(w) as (w + w*)/2 and im(w) as (w - w*)/(2i), with w* the
/// constant-conjugated subtree. The result agrees with the input at real
/// arguments and is free of re/im, so it is the analytic continuation of the
/// input's real-coordinate form.
Expr expand_re_im(const Expr& e);

}  // namespace akm
