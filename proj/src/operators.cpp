#include "polyharm/operators.hpp"

#include <algorithm>

namespace polyharm {

namespace {

Expression q(const Rational& v) { return Expression::constant(v); }
Expression n(long v) { return Expression::integer(v); }

Expression d(const Expression& e, std::string_view v) { return differentiate(e, v); }

bool is_eigenvalue(const Rational& v) {
  // -k(k+1) for some integer k >= 0.
  if (v.get_den() != 1 || v > 0) return false;
  long target = -v.get_num().get_si();
  for (long k = 0; k * (k + 1) <= target; ++k) {
    if (k * (k + 1) == target) return true;
  }
  return false;
}

Expression radial_operator(const Expression& F, const Expression& coefficient) {
  Expression first = d(F, "r");
  Expression second = d(first, "r");
  return simplify(second + coefficient * first);
}

}  // namespace

ForeignVariable::ForeignVariable(const std::string& name)
    : std::runtime_error("variable '" + name + "' is not a coordinate of the geometry") {}

ExpressionBlowup::ExpressionBlowup(std::size_t nodes)
    : std::runtime_error("expression grew to " + std::to_string(nodes) + " nodes") {}

SeparatedFunction make_separated(Expression radial, Rational lambda, Rational mu, bool sphere_spectral) {
  if (lambda > 0 || mu > 0) throw std::invalid_argument("sphere eigenvalues must be non-positive");
  if (sphere_spectral && (!is_eigenvalue(lambda) || !is_eigenvalue(mu))) {
    throw std::invalid_argument("sphere-spectral eigenvalues must be of the form -k(k+1)");
  }
  return SeparatedFunction{std::move(radial), std::move(lambda), std::move(mu), sphere_spectral};
}

void require_coordinates(const Expression& F, const Geometry& g) {
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    auto names = coordinate_names(*s);
    for (const auto& v : free_variables(F)) {
      if (std::find(names.begin(), names.end(), v) == names.end()) throw ForeignVariable(v);
    }
    return;
  }
  for (const auto& v : free_variables(F)) {
    if (v != "r") throw ForeignVariable(v);
  }
}

Expression radial_coefficient(const Model& g) {
  return simplify(q(g.m - 1) * d(g.f, "r") * pow(g.f, -1));
}

Expression radial_coefficient(const WarpedProduct& g) {
  return simplify(q(g.p - 1) * d(g.f1, "r") * pow(g.f1, -1) + q(g.q - 1) * d(g.f2, "r") * pow(g.f2, -1));
}

Expression eigenvalue_term(const SeparatedFunction& F, const WarpedProduct& g) {
  return simplify(q(F.lambda) * pow(g.f1, -2) + q(F.mu) * pow(g.f2, -2));
}

Expression radial_laplacian(const Expression& F, const Model& g) {
  require_coordinates(F, g);
  return radial_operator(F, radial_coefficient(g));
}

Expression warped_radial_laplacian(const Expression& F, const WarpedProduct& g) {
  require_coordinates(F, g);
  return radial_operator(F, radial_coefficient(g));
}

Expression separated_laplacian(const SeparatedFunction& F, const WarpedProduct& g) {
  require_coordinates(F.radial, g);
  Expression radial = radial_operator(F.radial, radial_coefficient(g));
  return simplify(radial + eigenvalue_term(F, g) * F.radial);
}

Expression cartesian_laplacian(const Expression& F, const SemiEuclidean& g) {
  require_coordinates(F, g);
  std::vector<Expression> terms;
  for (int i = 1; i <= g.p; ++i) {
    std::string x = "x" + std::to_string(i);
    terms.push_back(d(d(F, x), x));
  }
  for (int j = 1; j <= g.q; ++j) {
    std::string y = "y" + std::to_string(j);
    terms.push_back(-d(d(F, y), y));
  }
  return simplify(Expression::sum(std::move(terms)));
}

Expression tension(const Expression& F, const Model& g) { return radial_laplacian(F, g); }

Expression laplacian(const FunctionValue& F, const Geometry& g) {
  if (const auto* sep = std::get_if<SeparatedFunction>(&F)) {
    const auto* w = std::get_if<WarpedProduct>(&g);
    if (!w) throw IncompatibleFunction("separated functions live on warped products");
    return separated_laplacian(*sep, *w);
  }
  const Expression& e = std::get<Expression>(F);
  return std::visit(
      [&](const auto& geo) -> Expression {
        using T = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<T, Model>) {
          return radial_laplacian(e, geo);
        } else if constexpr (std::is_same_v<T, WarpedProduct>) {
          return warped_radial_laplacian(e, geo);
        } else {
          return cartesian_laplacian(e, geo);
        }
      },
      g);
}

Expression iterated_laplacian(const FunctionValue& F, const Geometry& g, int s, std::size_t node_cap) {
  if (s < 0) throw std::invalid_argument("order must be non-negative");
  FunctionValue current = F;
  auto radial_part = [](const FunctionValue& v) -> const Expression& {
    if (const auto* sep = std::get_if<SeparatedFunction>(&v)) return sep->radial;
    return std::get<Expression>(v);
  };
  Expression result = simplify(radial_part(current));
  if (auto* sep = std::get_if<SeparatedFunction>(&current)) sep->radial = result;
  if (s == 0) require_coordinates(result, g);
  for (int k = 0; k < s; ++k) {
    result = laplacian(current, g);
    if (result.node_count() > node_cap) throw ExpressionBlowup(result.node_count());
    if (auto* sep = std::get_if<SeparatedFunction>(&current)) {
      sep->radial = result;
    } else {
      current = result;
    }
  }
  return result;
}

Expression laplacian_product_rule(const Expression& F1, const Expression& F2, const Geometry& g) {
  Expression lap1 = laplacian(F1, g);
  Expression lap2 = laplacian(F2, g);
  Expression dot;
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    std::vector<Expression> terms;
    for (int i = 1; i <= s->p; ++i) {
      std::string x = "x" + std::to_string(i);
      terms.push_back(d(F1, x) * d(F2, x));
    }
    for (int j = 1; j <= s->q; ++j) {
      std::string y = "y" + std::to_string(j);
      terms.push_back(-(d(F1, y) * d(F2, y)));
    }
    dot = Expression::sum(std::move(terms));
  } else {
    dot = d(F1, "r") * d(F2, "r");
  }
  return simplify(F1 * lap2 + F2 * lap1 + n(2) * dot);
}

std::vector<Expression> pq_gradient(const Expression& F, const SemiEuclidean& g) {
  require_coordinates(F, g);
  std::vector<Expression> out;
  for (int i = 1; i <= g.p; ++i) out.push_back(d(F, "x" + std::to_string(i)));
  for (int j = 1; j <= g.q; ++j) out.push_back(simplify(-d(F, "y" + std::to_string(j))));
  return out;
}

Expression euler_pairing(const Expression& F, const SemiEuclidean& g) {
  require_coordinates(F, g);
  std::vector<Expression> terms;
  for (const auto& name : coordinate_names(g)) {
    terms.push_back(Expression::variable(name) * d(F, name));
  }
  return simplify(Expression::sum(std::move(terms)));
}

}  // namespace polyharm
