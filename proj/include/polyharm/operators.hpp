#pragma once

// Laplace-Beltrami operators specialized per geometry family.

#include "polyharm/expr.hpp"
#include "polyharm/geometry.hpp"

#include <variant>
#include <vector>

namespace polyharm {

/// Radial factor F(r) of F(r) V W, where V and W are eigenfunctions of the
/// two sphere Laplacians with eigenvalues lambda and mu. Only the
/// eigenvalues enter the operator, so V and W are never built.
struct SeparatedFunction {
  Expression radial;
  Rational lambda = 0;
  Rational mu = 0;
  /// When set, lambda and mu are of the form -k(k+1).
  bool sphere_spectral = false;
};

/// Throws std::invalid_argument when an eigenvalue is positive, or when a
/// sphere-spectral flag is set and an eigenvalue is not -k(k+1).
SeparatedFunction make_separated(Expression radial, Rational lambda, Rational mu,
                                 bool sphere_spectral = false);

using FunctionValue = std::variant<Expression, SeparatedFunction>;

class ForeignVariable : public std::runtime_error {
 public:
  explicit ForeignVariable(const std::string& name);
};

class ExpressionBlowup : public std::runtime_error {
 public:
  explicit ExpressionBlowup(std::size_t nodes);
};

class IncompatibleFunction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultNodeCap = 20000;

/// First-order coefficient of the radial operator: (m-1) f'/f, or
/// (p-1) f1'/f1 + (q-1) f2'/f2.
Expression radial_coefficient(const Model& g);
Expression radial_coefficient(const WarpedProduct& g);

/// Zeroth-order eigenvalue term lambda/f1^2 + mu/f2^2.
Expression eigenvalue_term(const SeparatedFunction& F, const WarpedProduct& g);

Expression radial_laplacian(const Expression& F, const Model& g);
Expression warped_radial_laplacian(const Expression& F, const WarpedProduct& g);
Expression separated_laplacian(const SeparatedFunction& F, const WarpedProduct& g);
Expression cartesian_laplacian(const Expression& F, const SemiEuclidean& g);

/// Same expression as radial_laplacian; the tension tau_F.
Expression tension(const Expression& F, const Model& g);

/// One application of the geometry's Laplacian. For a separated function
/// the radial factor of the result is returned.
Expression laplacian(const FunctionValue& F, const Geometry& g);

/// s-fold Laplacian with simplification between applications. Throws
/// ExpressionBlowup when an intermediate result exceeds node_cap nodes.
Expression iterated_laplacian(const FunctionValue& F, const Geometry& g, int s,
                              std::size_t node_cap = kDefaultNodeCap);

/// F1 dF2 + F2 dF1 + 2 grad F1 . grad F2 (signature dot product on R^{p,q}).
Expression laplacian_product_rule(const Expression& F1, const Expression& F2, const Geometry& g);

/// (dF/dx1, ..., dF/dxp, -dF/dy1, ..., -dF/dyq).
std::vector<Expression> pq_gradient(const Expression& F, const SemiEuclidean& g);

/// sum x_i dF/dx_i + sum y_j dF/dy_j (plus signs on both blocks).
Expression euler_pairing(const Expression& F, const SemiEuclidean& g);

/// Throws ForeignVariable unless every free variable of F is a coordinate of g
/// (r for the radial families).
void require_coordinates(const Expression& F, const Geometry& g);

}  // namespace polyharm
