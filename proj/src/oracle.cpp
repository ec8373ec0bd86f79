#include "polyharm/oracle.hpp"

#include "polyharm/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace polyharm {

namespace {

// Richardson extrapolation of a central-difference estimator whose error is a
// series in h^2.
double richardson(const std::function<double(double)>& estimate, double h, int levels) {
  std::vector<double> row;
  for (int k = 0; k < levels; ++k) row.push_back(estimate(h / std::pow(2.0, k)));
  for (int j = 1; j < levels; ++j) {
    double factor = std::pow(4.0, j);
    for (int k = levels - 1; k >= j; --k) row[static_cast<std::size_t>(k)] =
        (factor * row[static_cast<std::size_t>(k)] - row[static_cast<std::size_t>(k - 1)]) / (factor - 1);
  }
  return row.back();
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& err) {
    throw StencilSingular(std::string("stencil hits a singularity: ") + err.what());
  }
}

}  // namespace

void FDConfig::validate() const {
  if (!(h > 0)) throw std::invalid_argument("FD step must be positive");
  if (levels < 1 || levels > 3) throw std::invalid_argument("Richardson levels must be 1, 2 or 3");
  if (!(tolerance > 0)) throw std::invalid_argument("FD tolerance must be positive");
}

RadialEvaluator radial_evaluator(const Expression& F) {
  return [F](double r) { return evaluate(F, {{"r", r}}); };
}

PointEvaluator point_evaluator(const Expression& F, std::vector<std::string> coordinates) {
  return [F, coordinates = std::move(coordinates)](std::span<const double> x) {
    Assignment a;
    for (std::size_t i = 0; i < coordinates.size() && i < x.size(); ++i) a[coordinates[i]] = x[i];
    return evaluate(F, a);
  };
}

double fd_cartesian_laplacian(const PointEvaluator& F, const SemiEuclidean& g,
                              std::span<const double> point, const FDConfig& cfg) {
  cfg.validate();
  const std::size_t dims = static_cast<std::size_t>(g.p + g.q);
  if (point.size() != dims) throw std::invalid_argument("point dimension does not match the geometry");
  return guarded([&] {
    std::vector<double> x(point.begin(), point.end());
    double center = F(x);
    double total = 0;
    for (std::size_t i = 0; i < dims; ++i) {
      double sign = i < static_cast<std::size_t>(g.p) ? 1.0 : -1.0;
      double second = richardson(
          [&](double h) {
            std::vector<double> plus = x;
            std::vector<double> minus = x;
            plus[i] += h;
            minus[i] -= h;
            return (F(plus) - 2 * center + F(minus)) / (h * h);
          },
          cfg.h, cfg.levels);
      total += sign * second;
    }
    return total;
  });
}

double fd_radial_laplacian(const RadialEvaluator& F, const Geometry& g, double r, const FDConfig& cfg,
                           std::optional<Eigenvalues> eigen) {
  cfg.validate();
  Domain domain;
  Expression coefficient;
  Expression zeroth = Expression::integer(0);
  if (const auto* m = std::get_if<Model>(&g)) {
    domain = m->domain;
    coefficient = radial_coefficient(*m);
    if (eigen) throw std::invalid_argument("eigenvalue terms need a warped product");
  } else if (const auto* w = std::get_if<WarpedProduct>(&g)) {
    domain = w->domain;
    coefficient = radial_coefficient(*w);
    if (eigen) {
      SeparatedFunction sep{Expression::integer(1), Rational(eigen->lambda), Rational(eigen->mu), false};
      zeroth = eigenvalue_term(sep, *w);
    }
  } else {
    throw std::invalid_argument("radial Laplacian needs a model or warped product");
  }
  if (r - domain.lo < 2 * cfg.h || domain.hi - r < 2 * cfg.h) {
    throw OutOfDomain("r = " + std::to_string(r) + " is within 2h of the domain boundary");
  }
  return guarded([&] {
    double center = F(r);
    double second = richardson([&](double h) { return (F(r + h) - 2 * center + F(r - h)) / (h * h); },
                               cfg.h, cfg.levels);
    double first = richardson([&](double h) { return (F(r + h) - F(r - h)) / (2 * h); }, cfg.h, cfg.levels);
    Assignment at{{"r", r}};
    return second + evaluate(coefficient, at) * first + evaluate(zeroth, at) * center;
  });
}

CrossCheckReport cross_check(const Expression& symbolic, const std::vector<std::string>& coordinates,
                             const std::function<double(std::span<const double>)>& numeric,
                             const std::vector<std::vector<double>>& points, const FDConfig& cfg) {
  cfg.validate();
  if (points.size() < 3) throw std::invalid_argument("cross_check needs at least 3 sample points");
  CrossCheckReport report;
  auto sym = point_evaluator(symbolic, coordinates);
  for (std::size_t i = 0; i < points.size(); ++i) {
    double s = sym(points[i]);
    double n = numeric(points[i]);
    report.symbolic.push_back(s);
    report.numeric.push_back(n);
    double discrepancy = std::fabs(s - n) / std::max(std::fabs(n), 1.0);
    if (!(discrepancy <= report.max_relative_discrepancy)) {
      report.max_relative_discrepancy = discrepancy;
      report.worst_index = i;
    }
  }
  report.passed = report.max_relative_discrepancy <= cfg.tolerance;
  return report;
}

double quadrature(const std::function<double(double)>& integrand, double a, double b, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (a == b) return 0;
  if (a > b) return -quadrature(integrand, b, a, tol);

  struct Segment {
    double a, b, fa, fm, fb, whole, tol;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) { return (b - a) / 6 * (fa + 4 * fm + fb); };
  double fa = integrand(a);
  double fb = integrand(b);
  double fm = integrand((a + b) / 2);
  std::vector<Segment> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol}};
  double total = 0;
  int subdivisions = 0;
  while (!stack.empty()) {
    Segment s = stack.back();
    stack.pop_back();
    double m = (s.a + s.b) / 2;
    double lm = integrand((s.a + m) / 2);
    double rm = integrand((m + s.b) / 2);
    double left = simpson(s.a, m, s.fa, lm, s.fm);
    double right = simpson(m, s.b, s.fm, rm, s.fb);
    double delta = left + right - s.whole;
    if (std::fabs(delta) <= 15 * s.tol) {
      total += left + right + delta / 15;
      continue;
    }
    if (++subdivisions > 10000) throw QuadratureFailure("adaptive Simpson exceeded 10000 subdivisions");
    stack.push_back({s.a, m, s.fa, lm, s.fm, left, s.tol / 2});
    stack.push_back({m, s.b, s.fm, rm, s.fb, right, s.tol / 2});
  }
  if (!std::isfinite(total)) throw QuadratureFailure("quadrature produced a non-finite value");
  return total;
}

}  // namespace polyharm
