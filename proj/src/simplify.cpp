// Terminating bottom-up rewrite: constant folding, flattening, like-term
// collection for sums and products, and power merging. No trigonometric
// identities are applied.

#include "polyharm/expr.hpp"

#include "node.hpp"

#include <algorithm>
#include <map>

namespace polyharm {

namespace {

Expression constant(const Rational& q) { return Expression::constant(q); }

Expression simplify_power(const Expression& base, const Rational& n);
Expression simplify_product(const std::vector<Expression>& factors, int depth = 0);

std::optional<Rational> exact_power(const Rational& base, const Rational& n) {
  // Keep folded numbers to a sane size.
  if (abs(n.get_num()) > 256) return std::nullopt;
  unsigned long root = n.get_den().get_ui();
  mpz_class num = base.get_num();
  mpz_class den = base.get_den();
  if (root != 1) {
    if (num < 0) return std::nullopt;
    mpz_class rn;
    mpz_class rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), root) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), root) == 0) return std::nullopt;
    num = rn;
    den = rd;
  }
  long p = n.get_num().get_si();
  if (p < 0) {
    if (num == 0) return std::nullopt;
    std::swap(num, den);
    p = -p;
  }
  mpz_class pn;
  mpz_class pd;
  mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(p));
  mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
  if (pd < 0) {
    pd = -pd;
    pn = -pn;
  }
  Rational out(pn, pd);
  out.canonicalize();
  return out;
}

Expression simplify_power(const Expression& base, const Rational& n) {
  if (n == 0) return constant(1);
  if (n == 1) return base;
  switch (base.kind()) {
    case Kind::Constant:
      if (auto folded = exact_power(base.value(), n)) return constant(*folded);
      break;
    case Kind::Power:
      if (is_integer(n)) return simplify_power(base.child(0), base.exponent() * n);
      break;
    case Kind::Product:
      if (is_integer(n)) {
        std::vector<Expression> parts;
        parts.reserve(base.children().size());
        for (const auto& f : base.children()) parts.push_back(simplify_power(f, n));
        return simplify_product(parts);
      }
      break;
    default:
      break;
  }
  return mark_simplified(Expression::power(base, n));
}

Expression simplify_call(Builtin fn, const Expression& arg) {
  if (arg.is_constant(0)) {
    switch (fn) {
      case Builtin::Sin:
      case Builtin::Tan:
      case Builtin::Sinh:
      case Builtin::Tanh:
        return constant(0);
      case Builtin::Cos:
      case Builtin::Cosh:
      case Builtin::Sec:
      case Builtin::Exp:
        return constant(1);
      default:
        break;
    }
  }
  if (fn == Builtin::Ln && arg.is_constant(1)) return constant(0);
  return mark_simplified(Expression::call(fn, arg));
}

// Splits a simplified term into rational coefficient and remaining factor.
std::pair<Rational, Expression> split_coefficient(const Expression& t) {
  if (t.kind() == Kind::Constant) return {t.value(), constant(1)};
  if (t.kind() == Kind::Product && t.child(0).kind() == Kind::Constant) {
    auto kids = t.children();
    if (kids.size() == 2) return {kids[0].value(), kids[1]};
    return {kids[0].value(),
            mark_simplified(Expression::product(std::vector<Expression>(kids.begin() + 1, kids.end())))};
  }
  return {Rational(1), t};
}

Expression scale(const Rational& c, const Expression& rest) {
  if (c == 1) return rest;
  if (rest.is_constant(1)) return constant(c);
  std::vector<Expression> kids{constant(c)};
  if (rest.kind() == Kind::Product) {
    kids.insert(kids.end(), rest.children().begin(), rest.children().end());
  } else {
    kids.push_back(rest);
  }
  return mark_simplified(Expression::product(std::move(kids)));
}

Expression simplify_sum(const std::vector<Expression>& terms) {
  std::map<Expression, Rational> collected;
  Rational constant_part = 0;
  auto add = [&](const Expression& t) {
    auto [c, rest] = split_coefficient(t);
    if (rest.is_constant(1)) {
      constant_part += c;
      return;
    }
    auto [it, inserted] = collected.try_emplace(rest, c);
    if (!inserted) it->second += c;
  };
  for (const auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& k : t.children()) add(k);
    } else {
      add(t);
    }
  }
  std::vector<Expression> out;
  for (const auto& [rest, c] : collected) {
    if (c != 0) out.push_back(scale(c, rest));
  }
  if (constant_part != 0) out.push_back(constant(constant_part));
  if (out.empty()) return constant(0);
  if (out.size() == 1) return out[0];
  return mark_simplified(Expression::sum(std::move(out)));
}

Expression simplify_product(const std::vector<Expression>& factors, int depth) {
  Rational coefficient = 1;
  std::map<Expression, Rational> powers;
  auto add = [&](const Expression& f) {
    if (f.kind() == Kind::Constant) {
      coefficient *= f.value();
    } else if (f.kind() == Kind::Power) {
      auto [it, inserted] = powers.try_emplace(f.child(0), f.exponent());
      if (!inserted) it->second += f.exponent();
    } else {
      auto [it, inserted] = powers.try_emplace(f, Rational(1));
      if (!inserted) it->second += 1;
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& k : f.children()) add(k);
    } else {
      add(f);
    }
  }
  if (coefficient == 0) return constant(0);

  std::vector<Expression> out;
  bool reshaped = false;
  for (const auto& [base, n] : powers) {
    if (n == 0) continue;
    Expression p = n == 1 ? base : simplify_power(base, n);
    if (p.kind() == Kind::Constant || p.kind() == Kind::Product ||
        (p.kind() == Kind::Power && !(p.child(0) == base))) {
      reshaped = true;
    }
    out.push_back(std::move(p));
  }
  if (reshaped && depth < 4) {
    out.push_back(constant(coefficient));
    return simplify_product(out, depth + 1);
  }
  if (reshaped) {
    // Fold stray constants without another merge pass.
    std::vector<Expression> kept;
    for (auto& p : out) {
      if (p.kind() == Kind::Constant) {
        coefficient *= p.value();
      } else {
        kept.push_back(std::move(p));
      }
    }
    out = std::move(kept);
    if (coefficient == 0) return constant(0);
  }
  if (out.empty()) return constant(coefficient);
  if (coefficient == 1 && out.size() == 1) return out[0];
  if (coefficient != 1) out.insert(out.begin(), constant(coefficient));
  return mark_simplified(Expression::product(std::move(out)));
}

}  // namespace

Expression simplify(const Expression& e) {
  if (e.is_simplified()) return e;
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Pi:
    case Kind::Variable:
      return mark_simplified(e);
    case Kind::Negate:
      return simplify_product({constant(-1), simplify(e.child(0))});
    case Kind::Sum: {
      std::vector<Expression> kids;
      kids.reserve(e.children().size());
      for (const auto& c : e.children()) kids.push_back(simplify(c));
      return simplify_sum(kids);
    }
    case Kind::Product: {
      std::vector<Expression> kids;
      kids.reserve(e.children().size());
      for (const auto& c : e.children()) kids.push_back(simplify(c));
      return simplify_product(kids);
    }
    case Kind::Quotient:
      return simplify_product({simplify(e.child(0)), simplify_power(simplify(e.child(1)), -1)});
    case Kind::Power:
      return simplify_power(simplify(e.child(0)), e.exponent());
    case Kind::Call:
      return simplify_call(e.builtin(), simplify(e.child(0)));
  }
  return e;
}

}  // namespace polyharm
