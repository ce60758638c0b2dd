#include "akm/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <string_view>
#include <utility>

#include "akm/error.hpp"

namespace akm {

struct Expr::Node {
  Op op = Op::Const;
  cplx value{};
  std::size_t index = 0;
  int exponent = 0;
  Fn fn = Fn::Sqrt;
  // Leaves keep null children.
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
};

namespace {

constexpr std::array<std::pair<std::string_view, Fn>, 7> kFunctions{{
    {"sqrt", Fn::Sqrt},
    {"exp", Fn::Exp},
    {"log", Fn::Log},
    {"sin", Fn::Sin},
    {"cos", Fn::Cos},
    {"sinh", Fn::Sinh},
    {"cosh", Fn::Cosh},
}};

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

cplx ipow(cplx base, int n) {
  bool invert = n < 0;
  unsigned long long k = invert ? -static_cast<long long>(n) : n;
  cplx result{1.0, 0.0};
  while (k) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return invert ? cplx{1.0, 0.0} / result : result;
}

}  // namespace

const char* fn_name(Fn f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name.data();
  return "?";
}

// ---------------------------------------------------------------------------
// construction

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr::Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Expr Expr::constant(cplx c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  return Expr(std::move(n));
}

namespace {

template <class F>
std::optional<cplx> fold(const Expr& l, const Expr& r, F f) {
  if (!l.is_const() || !r.is_const()) return std::nullopt;
  cplx v = f(l.value(), r.value());
  if (!finite(v)) return std::nullopt;
  return v;
}

}  // namespace

Expr Expr::neg(Expr e) {
  if (e.is_const()) return constant(-e.value());
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->a = std::move(e);
  return Expr(std::move(n));
}

#define AKM_BINARY(NAME, OPCODE, EXPR)                              \
  Expr Expr::NAME(Expr l, Expr r) {                                 \
    if (auto v = fold(l, r, [](cplx x, cplx y) { return EXPR; }))   \
      return constant(*v);                                          \
    auto n = std::make_shared<Node>();                              \
    n->op = OPCODE;                                                 \
    n->a = std::move(l);                                            \
    n->b = std::move(r);                                            \
    return Expr(std::move(n));                                      \
  }

AKM_BINARY(add, Op::Add, x + y)
AKM_BINARY(sub, Op::Sub, x - y)
AKM_BINARY(mul, Op::Mul, x * y)
#undef AKM_BINARY

Expr Expr::div(Expr l, Expr r) {
  if (r.is_const() && r.value() != cplx{}) {
    if (auto v = fold(l, r, [](cplx x, cplx y) { return x / y; }))
      return constant(*v);
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Div;
  n->a = std::move(l);
  n->b = std::move(r);
  return Expr(std::move(n));
}

Expr Expr::pow_int(Expr base, int exponent) {
  if (base.is_const() && (exponent >= 0 || base.value() != cplx{})) {
    cplx v = ipow(base.value(), exponent);
    if (finite(v)) return constant(v);
  }
  auto n = std::make_shared<Node>();
  n->op = Op::PowInt;
  n->a = std::move(base);
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::func(Fn f, Expr e) {
  auto n = std::make_shared<Node>();
  n->op = Op::Func;
  n->fn = f;
  n->a = std::move(e);
  return Expr(std::move(n));
}

Expr Expr::re(Expr e) {
  auto n = std::make_shared<Node>();
  n->op = Op::Re;
  n->a = std::move(e);
  return Expr(std::move(n));
}

Expr Expr::im(Expr e) {
  auto n = std::make_shared<Node>();
  n->op = Op::Im;
  n->a = std::move(e);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
cplx Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
Fn Expr::fn() const { return node_->fn; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  if (x.op() != y.op()) return false;
  switch (x.op()) {
    case Op::Const: return x.value() == y.value();
    case Op::Var: return x.index() == y.index();
    case Op::PowInt: return x.exponent() == y.exponent() && x.lhs() == y.lhs();
    case Op::Func: return x.fn() == y.fn() && x.lhs() == y.lhs();
    case Op::Neg:
    case Op::Re:
    case Op::Im: return x.lhs() == y.lhs();
    default: return x.lhs() == y.lhs() && x.rhs() == y.rhs();
  }
}

Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::sub(std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::div(std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

// ---------------------------------------------------------------------------
// parser

namespace {

constexpr int kMaxDepth = 256;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_body(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool reserved(std::string_view name) {
  if (name == "i" || name == "re" || name == "im") return true;
  for (const auto& [fname, _] : kFunctions)
    if (fname == name) return true;
  return false;
}

void check_coords(std::span<const std::string> coords) {
  if (coords.empty()) throw Error(ErrorKind::Schema, "coordinate list is empty");
  std::set<std::string_view> seen;
  for (const auto& c : coords) {
    if (c.empty() || !ident_start(c[0]))
      throw Error(ErrorKind::Schema, "invalid coordinate name '" + c + "'");
    for (char ch : c)
      if (!ident_body(ch)) throw Error(ErrorKind::Schema, "invalid coordinate name '" + c + "'");
    if (reserved(c)) throw Error(ErrorKind::Schema, "coordinate name '" + c + "' is reserved");
    if (!seen.insert(c).second)
      throw Error(ErrorKind::Schema, "duplicate coordinate name '" + c + "'");
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords)
      : text_(text), coords_(coords) {}

  Expr run() {
    Expr e = expression();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Syntax, msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth_ > kMaxDepth) p.fail("expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = Expr::add(std::move(e), term());
      else if (accept('-'))
        e = Expr::sub(std::move(e), term());
      else
        return e;
    }
  }

  Expr term() {
    Expr e = power();
    for (;;) {
      if (accept('*'))
        e = Expr::mul(std::move(e), power());
      else if (accept('/'))
        e = Expr::div(std::move(e), power());
      else
        return e;
    }
  }

  Expr power() {
    Expr e = unary();
    while (accept('^')) e = Expr::pow_int(std::move(e), integer_exponent());
    return e;
  }

  int integer_exponent() {
    skip_ws();
    bool paren = accept('(');
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      pos_ = start;
      fail("exponent must be an integer literal");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("exponent must be an integer literal");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || value > 1000000) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (paren) expect(')');
    return negative ? -value : value;
  }

  Expr unary() {
    DepthGuard guard(*this);
    if (accept('-')) return Expr::neg(unary());
    return primary();
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected operand before end of input");
    char c = text_[pos_];
    if (c == '(') {
      DepthGuard guard(*this);
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) return identifier();
    fail("expected operand");
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent in number");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_body(text_[pos_])) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      auto argument = [&] {
        DepthGuard guard(*this);
        ++pos_;
        Expr e = expression();
        expect(')');
        return e;
      };
      if (name == "re") return Expr::re(argument());
      if (name == "im") return Expr::im(argument());
      for (const auto& [fname, fn] : kFunctions)
        if (fname == name) return Expr::func(fn, argument());
    }
    if (name == "i") return Expr::constant(cplx{0.0, 1.0});
    for (std::size_t k = 0; k < coords_.size(); ++k)
      if (coords_[k] == name) return Expr::var(k);
    throw Error(ErrorKind::UnknownIdentifier, "unknown identifier '" + std::string(name) + "'",
                start);
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords) {
  check_coords(coords);
  return Parser(text, coords).run();
}

// ---------------------------------------------------------------------------
// formatter

namespace {

enum Prec { kSum = 1, kProduct = 2, kPower = 3, kUnary = 4, kAtom = 5 };

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

struct Piece {
  std::string text;
  int prec;
};

Piece format_const(cplx c) {
  double re = c.real(), im = c.imag();
  if (im == 0.0) return {shortest(re), std::signbit(re) ? kUnary : kAtom};
  if (re == 0.0) {
    if (im == 1.0) return {"i", kAtom};
    return {"(" + shortest(im) + "*i)", kAtom};
  }
  std::string s = "(" + shortest(re);
  s += std::signbit(im) ? " - " : " + ";
  s += shortest(std::abs(im)) + "*i)";
  return {s, kAtom};
}

class Formatter {
 public:
  explicit Formatter(std::span<const std::string> coords) : coords_(coords) {}

  Piece run(const Expr& e) const {
    switch (e.op()) {
      case Op::Const: return format_const(e.value());
      case Op::Var: return {coords_[e.index()], kAtom};
      case Op::Neg: return {"-" + wrap(run(e.lhs()), kUnary), kUnary};
      case Op::Add: return binary(e, " + ", kSum);
      case Op::Sub: return binary(e, " - ", kSum);
      case Op::Mul: return binary(e, "*", kProduct);
      case Op::Div: return binary(e, "/", kProduct);
      case Op::PowInt:
        return {wrap(run(e.lhs()), kPower) + "^" + std::to_string(e.exponent()), kPower};
      case Op::Func: return {std::string(fn_name(e.fn())) + "(" + run(e.lhs()).text + ")", kAtom};
      case Op::Re: return {"re(" + run(e.lhs()).text + ")", kAtom};
      case Op::Im: return {"im(" + run(e.lhs()).text + ")", kAtom};
    }
    return {"?", kAtom};
  }

 private:
  static std::string wrap(const Piece& p, int min_prec) {
    return p.prec < min_prec ? "(" + p.text + ")" : p.text;
  }

  Piece binary(const Expr& e, const char* sym, int prec) const {
    Piece l = run(e.lhs());
    Piece r = run(e.rhs());
    // left associative: the right operand needs parentheses at equal precedence
    return {wrap(l, prec) + sym + wrap(r, prec + 1), prec};
  }

  std::span<const std::string> coords_;
};

}  // namespace

std::string format(const Expr& e, std::span<const std::string> coords) {
  return Formatter(coords).run(e).text;
}

// ---------------------------------------------------------------------------
// tree utilities

bool has_re_im(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var: return false;
    case Op::Re:
    case Op::Im: return true;
    case Op::Neg:
    case Op::PowInt:
    case Op::Func: return has_re_im(e.lhs());
    default: return has_re_im(e.lhs()) || has_re_im(e.rhs());
  }
}

bool has_complex_constant(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return e.value().imag() != 0.0;
    case Op::Var: return false;
    case Op::Neg:
    case Op::PowInt:
    case Op::Func:
    case Op::Re:
    case Op::Im: return has_complex_constant(e.lhs());
    default: return has_complex_constant(e.lhs()) || has_complex_constant(e.rhs());
  }
}

std::size_t var_bound(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return 0;
    case Op::Var: return e.index() + 1;
    case Op::Neg:
    case Op::PowInt:
    case Op::Func:
    case Op::Re:
    case Op::Im: return var_bound(e.lhs());
    default: return std::max(var_bound(e.lhs()), var_bound(e.rhs()));
  }
}

std::size_t node_count(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var: return 1;
    case Op::Neg:
    case Op::PowInt:
    case Op::Func:
    case Op::Re:
    case Op::Im: return 1 + node_count(e.lhs());
    default: return 1 + node_count(e.lhs()) + node_count(e.rhs());
  }
}

namespace {

template <class Leaf>
Expr rebuild(const Expr& e, const Leaf& leaf) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var: return leaf(e);
    case Op::Neg: return Expr::neg(rebuild(e.lhs(), leaf));
    case Op::Add: return Expr::add(rebuild(e.lhs(), leaf), rebuild(e.rhs(), leaf));
    case Op::Sub: return Expr::sub(rebuild(e.lhs(), leaf), rebuild(e.rhs(), leaf));
    case Op::Mul: return Expr::mul(rebuild(e.lhs(), leaf), rebuild(e.rhs(), leaf));
    case Op::Div: return Expr::div(rebuild(e.lhs(), leaf), rebuild(e.rhs(), leaf));
    case Op::PowInt: return Expr::pow_int(rebuild(e.lhs(), leaf), e.exponent());
    case Op::Func: return Expr::func(e.fn(), rebuild(e.lhs(), leaf));
    case Op::Re: return Expr::re(rebuild(e.lhs(), leaf));
    case Op::Im: return Expr::im(rebuild(e.lhs(), leaf));
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, std::span<const Expr> replacement) {
  return rebuild(e, [&](const Expr& leaf) {
    if (leaf.op() == Op::Var) {
      if (leaf.index() >= replacement.size())
        throw Error(ErrorKind::DimensionMismatch, "substitution is missing a variable");
      return replacement[leaf.index()];
    }
    return leaf;
  });
}

Expr conjugate_constants(const Expr& e) {
  return rebuild(e, [](const Expr& leaf) {
    if (leaf.op() == Op::Const) return Expr::constant(std::conj(leaf.value()));
    return leaf;
  });
}

Expr expand_re_im(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var: return e;
    case Op::Neg: return Expr::neg(expand_re_im(e.lhs()));
    case Op::Add: return Expr::add(expand_re_im(e.lhs()), expand_re_im(e.rhs()));
    case Op::Sub: return Expr::sub(expand_re_im(e.lhs()), expand_re_im(e.rhs()));
    case Op::Mul: return Expr::mul(expand_re_im(e.lhs()), expand_re_im(e.rhs()));
    case Op::Div: return Expr::div(expand_re_im(e.lhs()), expand_re_im(e.rhs()));
    case Op::PowInt: return Expr::pow_int(expand_re_im(e.lhs()), e.exponent());
    case Op::Func: return Expr::func(e.fn(), expand_re_im(e.lhs()));
    case Op::Re: {
      Expr w = expand_re_im(e.lhs());
      return (w + conjugate_constants(w)) / Expr::constant(2.0);
    }
    case Op::Im: {
      Expr w = expand_re_im(e.lhs());
      return (w - conjugate_constants(w)) / Expr::constant(cplx{0.0, 2.0});
    }
  }
  return e;
}

}  // namespace akm
