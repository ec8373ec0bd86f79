// Exact canonicalization of rational functions over Q[pi, vars]: the
// expression is folded into one numerator polynomial over a product of
// denominator factors. Zero iff the numerator expands to zero.

#include "polyharm/zero_test.hpp"

#include "node.hpp"

#include <map>
#include <optional>

namespace polyharm {

namespace {

using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rational>;

class Canonicalizer {
 public:
  explicit Canonicalizer(const Expression& e) {
    for (const auto& v : free_variables(e)) index_.emplace(v, index_.size());
    index_.emplace("\x01pi", index_.size());
  }

  struct Fraction {
    Poly num;
    std::vector<std::pair<Poly, long>> den;
  };

  std::optional<Fraction> run(const Expression& e) {
    switch (e.kind()) {
      case Kind::Constant:
        return constant(e.value());
      case Kind::Pi:
        return monomial(index_.at("\x01pi"));
      case Kind::Variable:
        return monomial(index_.at(e.name()));
      case Kind::Negate: {
        auto a = run(e.child(0));
        if (!a) return std::nullopt;
        scale(a->num, Rational(-1));
        return a;
      }
      case Kind::Sum: {
        Fraction acc = constant(0);
        for (const auto& t : e.children()) {
          auto f = run(t);
          if (!f) return std::nullopt;
          acc = add(acc, *f);
        }
        return acc;
      }
      case Kind::Product: {
        Fraction acc = constant(1);
        for (const auto& t : e.children()) {
          auto f = run(t);
          if (!f) return std::nullopt;
          acc = mul(acc, *f);
          if (acc.num.empty()) return acc;
        }
        return acc;
      }
      case Kind::Quotient: {
        auto a = run(e.child(0));
        auto b = run(e.child(1));
        if (!a || !b) return std::nullopt;
        auto inv = invert(*b);
        if (!inv) return std::nullopt;
        return mul(*a, *inv);
      }
      case Kind::Power: {
        if (!is_integer(e.exponent())) return std::nullopt;
        auto base = run(e.child(0));
        if (!base) return std::nullopt;
        long k = e.exponent().get_num().get_si();
        if (k < 0) {
          auto inv = invert(*base);
          if (!inv) return std::nullopt;
          base = inv;
          k = -k;
        }
        return power(*base, k);
      }
      case Kind::Call:
        return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  std::size_t nvars() const { return index_.size(); }

  Fraction constant(const Rational& c) {
    Fraction f;
    if (c != 0) f.num.emplace(Monomial(nvars(), 0), c);
    return f;
  }

  Fraction monomial(std::size_t i) {
    Fraction f;
    Monomial m(nvars(), 0);
    m[i] = 1;
    f.num.emplace(std::move(m), Rational(1));
    return f;
  }

  static void scale(Poly& p, const Rational& c) {
    for (auto& [m, coef] : p) coef *= c;
  }

  static Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        Monomial m(ma.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        Rational c = ca * cb;
        auto [it, inserted] = out.try_emplace(std::move(m), c);
        if (!inserted) {
          it->second += c;
          if (it->second == 0) out.erase(it);
        }
      }
    }
    return out;
  }

  static Poly poly_add(Poly a, const Poly& b) {
    for (const auto& [m, c] : b) {
      auto [it, inserted] = a.try_emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) a.erase(it);
      }
    }
    return a;
  }

  Poly poly_pow(const Poly& p, long k) {
    Poly result;
    result.emplace(Monomial(nvars(), 0), Rational(1));
    Poly base = p;
    while (k > 0) {
      if (k & 1) result = poly_mul(result, base);
      k >>= 1;
      if (k) base = poly_mul(base, base);
    }
    return result;
  }

  static bool is_constant_poly(const Poly& p) {
    if (p.size() != 1) return p.empty();
    for (int x : p.begin()->first) {
      if (x != 0) return false;
    }
    return true;
  }

  Fraction add(const Fraction& a, const Fraction& b) {
    if (a.num.empty()) return b;
    if (b.num.empty()) return a;
    std::vector<std::pair<Poly, long>> den = a.den;
    for (const auto& [f, e] : b.den) {
      bool found = false;
      for (auto& [g, ge] : den) {
        if (g == f) {
          ge = std::max(ge, e);
          found = true;
          break;
        }
      }
      if (!found) den.emplace_back(f, e);
    }
    auto lift = [&](const Fraction& x) {
      Poly num = x.num;
      for (const auto& [f, e] : den) {
        long have = 0;
        for (const auto& [g, ge] : x.den) {
          if (g == f) have = ge;
        }
        if (e > have) num = poly_mul(num, poly_pow(f, e - have));
      }
      return num;
    };
    Fraction out;
    out.num = poly_add(lift(a), lift(b));
    out.den = std::move(den);
    return out;
  }

  Fraction mul(const Fraction& a, const Fraction& b) {
    Fraction out;
    out.num = poly_mul(a.num, b.num);
    if (out.num.empty()) return out;
    out.den = a.den;
    for (const auto& [f, e] : b.den) {
      bool found = false;
      for (auto& [g, ge] : out.den) {
        if (g == f) {
          ge += e;
          found = true;
          break;
        }
      }
      if (!found) out.den.emplace_back(f, e);
    }
    return out;
  }

  std::optional<Fraction> invert(const Fraction& a) {
    if (a.num.empty()) return std::nullopt;
    Fraction out;
    out.num.emplace(Monomial(nvars(), 0), Rational(1));
    for (const auto& [f, e] : a.den) out.num = poly_mul(out.num, poly_pow(f, e));
    if (is_constant_poly(a.num)) {
      scale(out.num, 1 / a.num.begin()->second);
      return out;
    }
    // Normalize the new factor to leading coefficient one.
    Poly factor = a.num;
    Rational lead = factor.rbegin()->second;
    scale(factor, 1 / lead);
    scale(out.num, 1 / lead);
    out.den.emplace_back(std::move(factor), 1);
    return out;
  }

  Fraction power(const Fraction& a, long k) {
    Fraction out;
    out.num = poly_pow(a.num, k);
    for (const auto& [f, e] : a.den) out.den.emplace_back(f, e * k);
    return out;
  }

  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace

bool proven_zero(const Expression& e) {
  if (!is_rational_function(e)) return false;
  Canonicalizer c(e);
  auto f = c.run(e);
  return f && f->num.empty();
}

}  // namespace polyharm
