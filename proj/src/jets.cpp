#include "akm/jets.hpp"

#include <string>

namespace akm {

namespace {

const char* segment(Op op, bool right) {
  switch (op) {
    case Op::Neg: return "neg";
    case Op::Add: return right ? "add.rhs" : "add.lhs";
    case Op::Sub: return right ? "sub.rhs" : "sub.lhs";
    case Op::Mul: return right ? "mul.rhs" : "mul.lhs";
    case Op::Div: return right ? "div.rhs" : "div.lhs";
    case Op::PowInt: return "pow";
    case Op::Func: return "func";
    case Op::Re: return "re";
    case Op::Im: return "im";
    default: return "leaf";
  }
}

template <class F>
auto child(const Expr& parent, bool right, F&& f) {
  try {
    return f();
  } catch (const Error& err) {
    std::string seg = segment(parent.op(), right);
    if (parent.op() == Op::Func) seg = fn_name(parent.fn());
    throw err.with_path_prefix(seg);
  }
}

enum class Mode {
  RealField,        // S = double
  RealDirections,   // S = cplx inside re/im: complex values, real coordinates
  Holomorphic,      // S = cplx, complex coordinates
};

template <class S, Mode M>
class Evaluator {
 public:
  explicit Evaluator(std::span<const Jet2<S>> vars) : vars_(vars) {}

  Jet2<S> run(const Expr& e) const {
    switch (e.op()) {
      case Op::Const: return constant(e.value());
      case Op::Var: {
        if (e.index() >= vars_.size())
          throw Error(ErrorKind::DimensionMismatch,
                      "variable index " + std::to_string(e.index()) + " out of range");
        return vars_[e.index()];
      }
      case Op::Neg: return -child(e, false, [&] { return run(e.lhs()); });
      case Op::Add: return left(e) + right(e);
      case Op::Sub: return left(e) - right(e);
      case Op::Mul: return left(e) * right(e);
      case Op::Div: {
        Jet2<S> l = left(e);
        Jet2<S> r = right(e);
        return child(e, true, [&] { return l / r; });
      }
      case Op::PowInt: {
        Jet2<S> b = left(e);
        return child(e, false, [&] { return pow_int(b, e.exponent()); });
      }
      case Op::Func: {
        Jet2<S> a = left(e);
        return child(e, false, [&] { return apply_fn(e.fn(), a); });
      }
      case Op::Re:
      case Op::Im: return projection(e);
    }
    throw Error(ErrorKind::Schema, "corrupt expression node");
  }

 private:
  Jet2<S> left(const Expr& e) const { return child(e, false, [&] { return run(e.lhs()); }); }
  Jet2<S> right(const Expr& e) const { return child(e, true, [&] { return run(e.rhs()); }); }

  std::size_t n() const { return vars_.size(); }

  Jet2<S> constant(cplx c) const {
    if constexpr (M == Mode::RealField) {
      if (c.imag() != 0.0)
        throw Error(ErrorKind::ComplexInRealField,
                    "complex constant outside re()/im() in a real-field evaluation");
      return Jet2<S>(n(), c.real());
    } else {
      return Jet2<S>(n(), c);
    }
  }

  Jet2<S> projection(const Expr& e) const {
    if constexpr (M == Mode::Holomorphic) {
      throw Error(ErrorKind::HolomorphyViolation, "re()/im() in a holomorphic evaluation");
    } else {
      bool real_part = e.op() == Op::Re;
      Jet2<cplx> inner = child(e, false, [&] {
        if constexpr (M == Mode::RealField) {
          std::vector<Jet2<cplx>> lifted;
          lifted.reserve(vars_.size());
          for (const auto& v : vars_)
            lifted.push_back(v.template map<cplx>([](double x) { return cplx{x, 0.0}; }));
          return Evaluator<cplx, Mode::RealDirections>(lifted).run(e.lhs());
        } else {
          return run(e.lhs());
        }
      });
      return inner.template map<S>([real_part](cplx z) -> S {
        return real_part ? S(z.real()) : S(z.imag());
      });
    }
  }

  std::span<const Jet2<S>> vars_;
};

}  // namespace

Jet2<double> eval_jet2(const Expr& e, std::span<const Jet2<double>> vars) {
  return Evaluator<double, Mode::RealField>(vars).run(e);
}

Jet2<double> eval_jet2(const Expr& e, std::span<const double> point) {
  auto vars = seed(point);
  return eval_jet2(e, std::span<const Jet2<double>>(vars));
}

Jet2<cplx> eval_jet2(const Expr& e, std::span<const Jet2<cplx>> vars) {
  return Evaluator<cplx, Mode::Holomorphic>(vars).run(e);
}

Jet2<cplx> eval_jet2(const Expr& e, std::span<const cplx> point) {
  auto vars = seed(point);
  return eval_jet2(e, std::span<const Jet2<cplx>>(vars));
}

}  // namespace akm
