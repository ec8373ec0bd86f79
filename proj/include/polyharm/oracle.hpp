#pragma once

// Finite-difference Laplacians and adaptive quadrature. Independent of the
// symbolic differentiation path; used to cross-check it.

#include "polyharm/expr.hpp"
#include "polyharm/geometry.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace polyharm {

struct FDConfig {
  double h = 1e-3;
  int levels = 2;
  double tolerance = 1e-6;  // relative

  /// Throws std::invalid_argument unless h > 0 and levels is 1, 2 or 3.
  void validate() const;
};

using RadialEvaluator = std::function<double(double)>;
/// Point given in coordinate order x1..xp, y1..yq.
using PointEvaluator = std::function<double(std::span<const double>)>;

class StencilSingular : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RadialEvaluator radial_evaluator(const Expression& F);
PointEvaluator point_evaluator(const Expression& F, std::vector<std::string> coordinates);

/// Central second differences in x minus those in y, Richardson-extrapolated
/// over steps h, h/2, h/4.
double fd_cartesian_laplacian(const PointEvaluator& F, const SemiEuclidean& g,
                              std::span<const double> point, const FDConfig& cfg = {});

/// Eigenvalues for the zeroth-order term of a separated function.
struct Eigenvalues {
  double lambda = 0;
  double mu = 0;
};

/// F'' + c(r) F' (+ eigenvalue term), derivatives by central differences and
/// c(r) evaluated exactly. Rejects r within 2h of a domain boundary.
double fd_radial_laplacian(const RadialEvaluator& F, const Geometry& g, double r,
                           const FDConfig& cfg = {},
                           std::optional<Eigenvalues> eigen = std::nullopt);

struct CrossCheckReport {
  std::vector<double> symbolic;
  std::vector<double> numeric;
  double max_relative_discrepancy = 0;
  std::size_t worst_index = 0;
  bool passed = false;
};

/// Compares evaluate(symbolic) with a numeric operator over sample points.
/// Discrepancy at a point is |sym - num| / max(|num|, 1).
CrossCheckReport cross_check(const Expression& symbolic, const std::vector<std::string>& coordinates,
                             const std::function<double(std::span<const double>)>& numeric,
                             const std::vector<std::vector<double>>& points, const FDConfig& cfg = {});

/// Adaptive Simpson. Throws QuadratureFailure after 10,000 subdivisions.
double quadrature(const std::function<double(double)>& integrand, double a, double b, double tol);

}  // namespace polyharm
