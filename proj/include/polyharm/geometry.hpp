#pragma once

// The three metric families the Laplacians act on: rotationally symmetric
// models with a pole, doubly warped products over a focal variety, and flat
// semi-Euclidean space of signature (p, q).

#include "polyharm/expr.hpp"
#include "polyharm/zero_test.hpp"

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace polyharm {

/// Open interval of the distance coordinate; hi may be +infinity.
struct Domain {
  double lo = 0;
  double hi = std::numeric_limits<double>::infinity();
  bool bounded() const { return hi < std::numeric_limits<double>::infinity(); }
  bool contains(double r) const { return r > lo && r < hi; }
};

/// f^2(r) g_{S^{m-1}} + dr^2
struct Model {
  Expression f;
  int m = 2;
  Domain domain;
};

/// f1^2(r) g_{S^{p-1}} + dr^2 + f2^2(r) g_{S^{q-1}}
struct WarpedProduct {
  Expression f1;
  Expression f2;
  int p = 2;
  int q = 2;
  Domain domain;
};

/// R^{p,q} with metric diag(I_p, -I_q), coordinates x1..xp, y1..yq.
struct SemiEuclidean {
  int p = 1;
  int q = 0;
};

using Geometry = std::variant<Model, WarpedProduct, SemiEuclidean>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spec-file error carrying the offending key and 1-based line.
class GeometrySpecError : public GeometryError {
 public:
  GeometrySpecError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

// Validating constructors. Warping functions must be expressions in r that
// stay positive at sampled interior points.
Model make_model(Expression f, int m, Domain domain = {});
WarpedProduct make_warped(Expression f1, Expression f2, int p, int q, Domain domain = {});
SemiEuclidean make_semi_euclidean(int p, int q);

/// euclidean(m), hyperbolic(m), sphere(m), spherical-join(p,q),
/// hyperbolic-join(p,q), cylinder(p,q), semi-euclidean(p,q).
Geometry catalog(std::string_view name, const std::vector<int>& dims);

/// Parses "catalog:name(d1,d2)" or "name(d1,d2)".
Geometry catalog_from_string(std::string_view text);

/// Key/value geometry description; see README for the format.
Geometry parse_geometry_spec(std::string_view text);
Geometry load_geometry_file(const std::string& path);

std::string describe(const Geometry& g);

/// x1..xp then y1..yq.
std::vector<std::string> coordinate_names(const SemiEuclidean& g);

/// Renames the bare coordinates x, y, z to the first three canonical
/// coordinates (in x1..xp, y1..yq order). Returns the renaming applied.
std::pair<Expression, std::vector<std::pair<std::string, std::string>>> resolve_coordinate_aliases(
    const Expression& e, const SemiEuclidean& g);

/// Zero-test config whose radial region sits inside the geometry's domain.
ZeroTestConfig sampling_config(const Geometry& g, ZeroTestConfig base = {});

struct ConditionCheck {
  std::string name;
  double measured = 0;
  double required = 0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ConditionCheck> checks;
  bool passed() const;
  const ConditionCheck* first_failure() const;
};

/// Value of e at r = at; falls back to linear extrapolation from
/// at +/- {1e-4, 5e-5} when e is singular there.
double value_at_endpoint(const Expression& e, double at, double direction);

ValidationReport validate_model(const Model& g);
ValidationReport check_pole_smoothness(const Expression& h);

/// K(r) = -f''(r)/f(r).
Expression radial_curvature(const Model& g);

}  // namespace polyharm
