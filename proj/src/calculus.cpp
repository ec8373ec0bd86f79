#include "polyharm/expr.hpp"

#include "node.hpp"

#include <cmath>
#include <numbers>

namespace polyharm {

namespace {

using Real = long double;

constexpr Real kPoleThreshold = 1e-14L;

Expression zero() { return Expression::integer(0); }
Expression one() { return Expression::integer(1); }

Expression add(const Expression& a, const Expression& b) {
  if (a.is_constant(0)) return b;
  if (b.is_constant(0)) return a;
  return a + b;
}

Expression mul(const Expression& a, const Expression& b) {
  if (a.is_constant(0) || b.is_constant(0)) return zero();
  if (a.is_constant(1)) return b;
  if (b.is_constant(1)) return a;
  return a * b;
}

Expression outer_derivative(Builtin fn, const Expression& u) {
  switch (fn) {
    case Builtin::Sin:
      return cos(u);
    case Builtin::Cos:
      return -sin(u);
    case Builtin::Tan:
      return pow(sec(u), 2);
    case Builtin::Cot:
      return -pow(csc(u), 2);
    case Builtin::Sec:
      return sec(u) * tan(u);
    case Builtin::Csc:
      return -(csc(u) * cot(u));
    case Builtin::Sinh:
      return cosh(u);
    case Builtin::Cosh:
      return sinh(u);
    case Builtin::Tanh:
      return pow(cosh(u), -2);
    case Builtin::Coth:
      return -pow(sinh(u), -2);
    case Builtin::Exp:
      return exp(u);
    case Builtin::Ln:
      return pow(u, -1);
  }
  return zero();
}

Expression derive(const Expression& e, std::string_view v) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Pi:
      return zero();
    case Kind::Variable:
      return e.name() == v ? one() : zero();
    case Kind::Negate: {
      Expression d = derive(e.child(0), v);
      return d.is_constant(0) ? d : -d;
    }
    case Kind::Sum: {
      Expression acc = zero();
      for (const auto& t : e.children()) acc = add(acc, derive(t, v));
      return acc;
    }
    case Kind::Product: {
      auto kids = e.children();
      Expression acc = zero();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expression d = derive(kids[i], v);
        if (d.is_constant(0)) continue;
        std::vector<Expression> term;
        term.reserve(kids.size());
        for (std::size_t j = 0; j < kids.size(); ++j) term.push_back(i == j ? d : kids[j]);
        acc = add(acc, Expression::product(std::move(term)));
      }
      return acc;
    }
    case Kind::Quotient: {
      const Expression& a = e.child(0);
      const Expression& b = e.child(1);
      Expression da = derive(a, v);
      Expression db = derive(b, v);
      Expression left = mul(da, pow(b, -1));
      Expression right = db.is_constant(0) ? zero() : Expression::product({Expression::integer(-1), a, db, pow(b, -2)});
      return add(left, right);
    }
    case Kind::Power: {
      Expression du = derive(e.child(0), v);
      if (du.is_constant(0)) return zero();
      const Rational& n = e.exponent();
      return Expression::product({Expression::constant(n), pow(e.child(0), n - 1), du});
    }
    case Kind::Call: {
      Expression du = derive(e.child(0), v);
      if (du.is_constant(0)) return zero();
      return mul(outer_derivative(e.builtin(), e.child(0)), du);
    }
  }
  return zero();
}

Real checked(Real value, const char* what) {
  if (!std::isfinite(value)) throw DomainError(std::string("non-finite value in ") + what);
  return value;
}

Real reciprocal_guard(Real den, const char* what) {
  if (std::fabs(den) < kPoleThreshold) throw DomainError(std::string("pole in ") + what);
  return den;
}

Real eval(const Expression& e, const Assignment& a) {
  switch (e.kind()) {
    case Kind::Constant:
      return static_cast<Real>(e.value().get_num().get_d()) / static_cast<Real>(e.value().get_den().get_d());
    case Kind::Pi:
      return std::numbers::pi_v<Real>;
    case Kind::Variable: {
      auto it = a.find(e.name());
      if (it == a.end()) throw UnboundVariable(e.name());
      return it->second;
    }
    case Kind::Negate:
      return -eval(e.child(0), a);
    case Kind::Sum: {
      Real acc = 0;
      for (const auto& t : e.children()) acc += eval(t, a);
      return checked(acc, "sum");
    }
    case Kind::Product: {
      Real acc = 1;
      for (const auto& t : e.children()) acc *= eval(t, a);
      return checked(acc, "product");
    }
    case Kind::Quotient: {
      Real num = eval(e.child(0), a);
      Real den = reciprocal_guard(eval(e.child(1), a), "division");
      return checked(num / den, "division");
    }
    case Kind::Power: {
      Real base = eval(e.child(0), a);
      const Rational& n = e.exponent();
      if (is_integer(n)) {
        long k = n.get_num().get_si();
        if (k < 0) reciprocal_guard(base, "negative power");
        return checked(std::pow(base, static_cast<Real>(k)), "power");
      }
      if (base < 0) throw DomainError("fractional power of a negative number");
      if (n < 0) reciprocal_guard(base, "negative power");
      return checked(std::pow(base, static_cast<Real>(n.get_d())), "power");
    }
    case Kind::Call: {
      Real x = eval(e.child(0), a);
      switch (e.builtin()) {
        case Builtin::Sin:
          return std::sin(x);
        case Builtin::Cos:
          return std::cos(x);
        case Builtin::Tan:
          return checked(std::sin(x) / reciprocal_guard(std::cos(x), "tan"), "tan");
        case Builtin::Cot:
          return checked(std::cos(x) / reciprocal_guard(std::sin(x), "cot"), "cot");
        case Builtin::Sec:
          return checked(1 / reciprocal_guard(std::cos(x), "sec"), "sec");
        case Builtin::Csc:
          return checked(1 / reciprocal_guard(std::sin(x), "csc"), "csc");
        case Builtin::Sinh:
          return checked(std::sinh(x), "sinh");
        case Builtin::Cosh:
          return checked(std::cosh(x), "cosh");
        case Builtin::Tanh:
          return std::tanh(x);
        case Builtin::Coth:
          return checked(std::cosh(x) / reciprocal_guard(std::sinh(x), "coth"), "coth");
        case Builtin::Exp:
          return checked(std::exp(x), "exp");
        case Builtin::Ln:
          if (x <= 0) throw DomainError("logarithm of a non-positive number");
          return std::log(x);
      }
    }
  }
  return 0;
}

}  // namespace

Expression differentiate(const Expression& e, std::string_view variable) {
  return simplify(derive(e, variable));
}

double evaluate(const Expression& e, const Assignment& assignment) {
  return static_cast<double>(eval(e, assignment));
}

}  // namespace polyharm
