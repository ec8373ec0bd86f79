#pragma once

// Shared helpers for the test binaries: random expression corpora and
// independent numerical oracles that do not go through the symbolic path.

#include "polyharm/oracle.hpp"
#include "polyharm/verify.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace polyharm;

inline Expression var(const std::string& name) { return Expression::variable(name); }

inline Expression random_leaf(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  switch (rng() % 6) {
    case 0:
      return Expression::constant(Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
    case 1:
      return Expression::integer(1 + static_cast<long>(rng() % 3));
    default:
      return var(vars[rng() % vars.size()]);
  }
}

/// Random tree of depth <= depth over the full node vocabulary. Transcendental
/// calls wrap their argument so values stay moderate on [-1.5, 1.5].
inline Expression random_expression(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars) {
  if (depth == 0 || rng() % 5 == 0) return random_leaf(rng, vars);
  auto sub = [&] { return random_expression(rng, depth - 1, vars); };
  switch (rng() % 9) {
    case 0:
      return Expression::sum({sub(), sub()});
    case 1:
      return Expression::sum({sub(), sub(), sub()});
    case 2:
      return Expression::product({sub(), sub()});
    case 3:
      return Expression::quotient(sub(), Expression::sum({Expression::integer(2), pow(sub(), 2)}));
    case 4:
      return Expression::negate(sub());
    case 5: {
      static const long exps[] = {2, 3, -1};
      return pow(sub(), exps[rng() % 3]);
    }
    case 6: {
      static const Builtin bounded[] = {Builtin::Sin, Builtin::Cos, Builtin::Tanh};
      return Expression::call(bounded[rng() % 3], sub());
    }
    case 7: {
      // exp and cosh of a squashed argument
      Expression arg = Expression::call(Builtin::Sin, sub());
      return Expression::call(rng() % 2 ? Builtin::Exp : Builtin::Cosh, arg);
    }
    default: {
      // ln of something positive, or a pole-prone call
      if (rng() % 2) return ln(Expression::sum({Expression::integer(1), pow(sub(), 2)}));
      static const Builtin poles[] = {Builtin::Tan, Builtin::Cot, Builtin::Sec, Builtin::Csc, Builtin::Sinh,
                                      Builtin::Coth};
      return Expression::call(poles[rng() % 6], sub());
    }
  }
}

/// Random smooth radial function on (0, 1.5): short sums of r^k, sin, cos,
/// exp and ln terms with small rational coefficients.
inline Expression random_radial(std::mt19937_64& rng) {
  Expression r = var("r");
  std::vector<Expression> terms;
  int count = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < count; ++i) {
    Expression c = Expression::constant(Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 2)));
    Expression t;
    switch (rng() % 5) {
      case 0:
        t = pow(r, static_cast<long>(rng() % 4) + 1);
        break;
      case 1:
        t = sin(Expression::integer(1 + static_cast<long>(rng() % 3)) * r);
        break;
      case 2:
        t = cos(r);
        break;
      case 3:
        t = exp(Expression::constant(Rational(1, 2)) * r);
        break;
      default:
        t = ln(r);
        break;
    }
    terms.push_back(c * t);
  }
  return Expression::sum(std::move(terms));
}

inline double central_difference(const Expression& e, const std::string& v, Assignment at, double h) {
  Assignment plus = at;
  Assignment minus = at;
  plus[v] += h;
  minus[v] -= h;
  return (evaluate(e, plus) - evaluate(e, minus)) / (2 * h);
}

inline std::optional<double> try_evaluate(const Expression& e, const Assignment& at) {
  try {
    return evaluate(e, at);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

inline bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b)); }

inline SemiEuclidean flat(int p, int q) { return make_semi_euclidean(p, q); }

inline Geometry geo(const char* name, std::vector<int> dims) { return catalog(name, dims); }

inline ZeroTestConfig cfg_for(const Geometry& g) { return sampling_config(g); }

}  // namespace testing
