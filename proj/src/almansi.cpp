#include "polyharm/almansi.hpp"

#include "polyharm/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace polyharm {

namespace {

Expression radius() { return Expression::variable("r"); }

Expression q(const Rational& v) { return Expression::constant(v); }
Expression n(long v) { return Expression::integer(v); }

bool same(const Expression& a, std::string_view text) { return simplify(a) == simplify(parse(text)); }

Domain domain_of(const Geometry& g) {
  if (const auto* m = std::get_if<Model>(&g)) return m->domain;
  if (const auto* w = std::get_if<WarpedProduct>(&g)) return w->domain;
  throw IncompatibleFunction("radial harmonics need a model or warped product");
}

// Anchor as an exact expression, so closed forms can be normalized exactly.
Expression anchor_expression(const Domain& d) {
  if (!d.bounded()) return n(1);
  const double pi = std::numbers::pi;
  for (long k = 1; k <= 4; ++k) {
    double mid = (d.lo + d.hi) / 2;
    if (d.lo == 0 && std::fabs(mid - pi / static_cast<double>(k)) < 1e-15) {
      return Expression::product({q(Rational(1, k)), Expression::pi()});
    }
  }
  return q(Rational((d.lo + d.hi) / 2));
}

// Antiderivative of c / f^{m-1} for the families with a closed form, up to
// an additive constant.
std::optional<Expression> antiderivative(const Model& g, const Expression& c) {
  const Expression half_r = q(Rational(1, 2)) * radius();
  if (same(g.f, "r")) {
    if (g.m == 2) return c * ln(radius());
    return c * q(Rational(-1, g.m - 2)) * pow(radius(), 2 - g.m);
  }
  if (same(g.f, "sin(r)")) {
    if (g.m == 2) return c * ln(tan(half_r));
    if (g.m == 3) return -(c * cot(radius()));
  }
  if (same(g.f, "sinh(r)")) {
    if (g.m == 2) return c * ln(tanh(half_r));
    if (g.m == 3) return -(c * coth(radius()));
  }
  return std::nullopt;
}

std::optional<Expression> antiderivative(const WarpedProduct& g, const Expression& c) {
  const Expression two_r = n(2) * radius();
  if (g.p == 3 && g.q == 3 && same(g.f1, "sin(r)") && same(g.f2, "cos(r)")) return -(n(2) * c * cot(two_r));
  if (g.p == 3 && g.q == 3 && same(g.f1, "sinh(r)") && same(g.f2, "cosh(r)")) {
    return -(n(2) * c * coth(two_r));
  }
  if (same(g.f1, "r") && same(g.f2, "1")) return antiderivative(Model{g.f1, g.p, g.domain}, c);
  return std::nullopt;
}

Expression radial_weight(const Geometry& g) {
  if (const auto* m = std::get_if<Model>(&g)) return pow(m->f, m->m - 1);
  const auto& w = std::get<WarpedProduct>(g);
  return pow(w.f1, w.p - 1) * pow(w.f2, w.q - 1);
}

Expression radial_coefficient_of(const Geometry& g) {
  if (const auto* m = std::get_if<Model>(&g)) return radial_coefficient(*m);
  return radial_coefficient(std::get<WarpedProduct>(g));
}

ZeroVerdict verdict_with(const Expression& e, const ZeroTestConfig& cfg, const RadialHarmonic* F) {
  if (!F || F->closed_form) return is_zero(e, cfg);
  RadialHarmonic copy = *F;
  DerivedVariable phi{std::string(kHarmonicPlaceholder),
                      [copy](const Assignment& a) { return copy.value(a.at("r")); }};
  return is_zero(e, cfg, {phi});
}

double draw(const std::vector<Interval>& region, std::mt19937_64& rng) {
  double total = 0;
  for (const auto& iv : region) total += iv.length();
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  for (const auto& iv : region) {
    if (u <= iv.length()) return iv.lo + u;
    u -= iv.length();
  }
  return region.back().hi;
}

// Nearest p/q with q <= 12 when within 1e-7.
std::optional<Rational> snap(double v) {
  for (long den = 1; den <= 12; ++den) {
    double num = std::round(v * static_cast<double>(den));
    if (std::fabs(num / static_cast<double>(den) - v) < 1e-7) {
      Rational r(static_cast<long>(num), den);
      r.canonicalize();
      return r;
    }
  }
  return std::nullopt;
}

FunctionValue simplified(const FunctionValue& F) {
  if (const auto* sep = std::get_if<SeparatedFunction>(&F)) {
    SeparatedFunction out = *sep;
    out.radial = simplify(sep->radial);
    return out;
  }
  return simplify(std::get<Expression>(F));
}

const Expression& radial_part(const FunctionValue& F) {
  if (const auto* sep = std::get_if<SeparatedFunction>(&F)) return sep->radial;
  return std::get<Expression>(F);
}

void replace_radial(FunctionValue& F, Expression e) {
  if (auto* sep = std::get_if<SeparatedFunction>(&F)) {
    sep->radial = std::move(e);
  } else {
    F = std::move(e);
  }
}

}  // namespace

Expression build_H(const Geometry& g, const Rational& c1, const Rational& c2) {
  if (c1 == 0) throw ZeroLeadingCoefficient();
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    std::vector<Expression> squares;
    for (int i = 1; i <= s->p; ++i) squares.push_back(pow(Expression::variable("x" + std::to_string(i)), 2));
    for (int j = 1; j <= s->q; ++j) squares.push_back(-pow(Expression::variable("y" + std::to_string(j)), 2));
    return simplify(q(c1) * Expression::sum(std::move(squares)) + q(c2));
  }
  return simplify(q(c1) * pow(radius(), 2) + q(c2));
}

std::string HarmonicityReport::label() const {
  switch (classification) {
    case Classification::Harmonic:
      return std::to_string(s) + "-harmonic (identically zero)";
    case Classification::ProperHarmonic:
      return "proper " + std::to_string(s) + "-harmonic";
    case Classification::NotHarmonicUpTo:
      break;
  }
  return "not " + std::to_string(s) + "-harmonic";
}

bool HarmonicityReport::harmonic_at(int order) const {
  if (classification == Classification::NotHarmonicUpTo) return false;
  return order >= s;
}

HarmonicityReport classify(const FunctionValue& F, const Geometry& g, int s_max, const ZeroTestConfig& cfg) {
  if (s_max < 1) throw std::invalid_argument("s_max must be at least 1");
  HarmonicityReport report;
  report.geometry = describe(g);
  report.config = sampling_config(g, cfg);
  FunctionValue current = simplified(F);
  require_coordinates(radial_part(current), g);
  for (int k = 0; k <= s_max; ++k) {
    if (k > 0) replace_radial(current, iterated_laplacian(current, g, 1));
    OrderResult order{k, radial_part(current), is_zero(radial_part(current), report.config)};
    bool zero = order.verdict.zero();
    report.orders.push_back(std::move(order));
    if (zero) {
      report.classification = k == 0 ? Classification::Harmonic : Classification::ProperHarmonic;
      report.s = k;
      return report;
    }
  }
  report.classification = Classification::NotHarmonicUpTo;
  report.s = s_max;
  return report;
}

Expression almansi_lift(const Expression& F, const Geometry& g, const Rational& c1, const Rational& c2) {
  return simplify(build_H(g, c1, c2) * F);
}

SeparatedFunction almansi_lift(const SeparatedFunction& F, const Geometry& g, const Rational& c1,
                               const Rational& c2) {
  if (!std::holds_alternative<WarpedProduct>(g)) {
    throw IncompatibleFunction("separated functions live on warped products");
  }
  SeparatedFunction out = F;
  out.radial = simplify(build_H(g, c1, c2) * F.radial);
  return out;
}

Expression almansi_tower(const Expression& F, const SemiEuclidean& g, int s, const Rational& c1,
                         const Rational& c2) {
  if (s < 1) throw std::invalid_argument("tower height must be at least 1");
  require_coordinates(F, g);
  Expression lifted = simplify(pow(build_H(g, c1, c2), s) * F);
  if (lifted.node_count() > kDefaultNodeCap) throw ExpressionBlowup(lifted.node_count());
  return lifted;
}

RadialHarmonic radial_harmonic(const Geometry& g, const Rational& c) {
  if (c == 0) throw std::invalid_argument("radial harmonic constant must be non-zero");
  Domain domain = domain_of(g);
  Expression anchor = anchor_expression(domain);
  RadialHarmonic out;
  out.c = c;
  out.anchor = evaluate(anchor, {});
  out.derivative = simplify(q(c) * pow(radial_weight(g), -1));

  std::optional<Expression> G;
  if (const auto* m = std::get_if<Model>(&g)) G = antiderivative(*m, q(c));
  if (const auto* w = std::get_if<WarpedProduct>(&g)) G = antiderivative(*w, q(c));

  if (G) {
    Expression closed = simplify(*G);
    double offset = evaluate(closed, {{"r", out.anchor}});
    if (std::fabs(offset) > 1e-14) closed = simplify(closed - substitute(closed, "r", anchor));
    out.closed_form = closed;
    out.value = [closed](double r) { return evaluate(closed, {{"r", r}}); };
    return out;
  }
  Expression integrand = out.derivative;
  double anchor_value = out.anchor;
  out.value = [integrand, anchor_value](double r) {
    return quadrature([&](double t) { return evaluate(integrand, {{"r", t}}); }, anchor_value, r, 1e-12);
  };
  return out;
}

Expression radial_harmonic_defect(const RadialHarmonic& F, const Geometry& g) {
  Expression derivative = F.closed_form ? differentiate(*F.closed_form, "r") : F.derivative;
  return simplify(radial_weight(g) * derivative - q(F.c));
}

Expression laplacian_with_harmonic(const Expression& e, const Geometry& g, const RadialHarmonic& F,
                                   std::string_view placeholder) {
  auto total = [&](const Expression& u) {
    return simplify(differentiate(u, "r") + differentiate(u, placeholder) * F.derivative);
  };
  Expression first = total(e);
  return simplify(total(first) + radial_coefficient_of(g) * first);
}

ProbeReport weak_almansi_probe(const Model& g, const Expression& H, const ZeroTestConfig& base) {
  ZeroTestConfig cfg = sampling_config(g, base);
  ProbeReport report;
  report.header =
      "finite-sample probe: only the radial harmonics listed below are lifted; a PASS does not cover every "
      "locally defined harmonic function";
  report.geometry = describe(Geometry{g});
  report.H = simplify(H);
  require_coordinates(report.H, g);

  Expression lap_H = radial_laplacian(report.H, g);
  Expression bilap_H = radial_laplacian(lap_H, g);
  report.laplacian_of_H = is_zero(lap_H, cfg);
  report.bilaplacian_of_H = is_zero(bilap_H, cfg);
  report.H_proper_biharmonic = report.bilaplacian_of_H.zero() && !report.laplacian_of_H.zero();

  for (long c : {1L, -1L, 2L}) {
    RadialHarmonic F = radial_harmonic(g, Rational(c));
    ProbeEntry entry;
    if (F.closed_form) {
      entry.label = "F = " + format(*F.closed_form);
      entry.residual = iterated_laplacian(simplify(report.H * *F.closed_form), g, 2);
      entry.verdict = is_zero(entry.residual, cfg);
    } else {
      entry.label = "F = radial harmonic with c = " + std::to_string(c) + " (numeric)";
      Expression phi = Expression::variable(std::string(kHarmonicPlaceholder));
      Expression once = laplacian_with_harmonic(simplify(report.H * phi), g, F, kHarmonicPlaceholder);
      entry.residual = laplacian_with_harmonic(once, g, F, kHarmonicPlaceholder);
      entry.verdict = verdict_with(entry.residual, cfg, &F);
    }
    report.lifts.push_back(std::move(entry));
  }
  report.lifts.push_back(ProbeEntry{"F = 1", bilap_H, report.bilaplacian_of_H});

  report.passed = true;
  for (const auto& entry : report.lifts) {
    if (!entry.verdict.zero()) {
      report.passed = false;
      report.failure = "Delta^2(H F) does not vanish for " + entry.label;
      report.failure_verdict = entry.verdict;
      return report;
    }
  }
  if (!report.H_proper_biharmonic) {
    report.passed = false;
    report.failure = report.bilaplacian_of_H.zero() ? "H is harmonic, so not proper biharmonic"
                                                    : "H is not biharmonic";
    report.failure_verdict = report.bilaplacian_of_H.zero() ? report.laplacian_of_H : report.bilaplacian_of_H;
  }
  return report;
}

std::vector<ConjectureEntry> conjecture_probe(int k_max, const ZeroTestConfig& base, int k_min) {
  if (k_min < 1 || k_max < k_min || k_max > 4) {
    throw PreconditionViolated("conjecture probe needs 1 <= k_min <= k_max <= 4");
  }
  Geometry g = catalog("spherical-join", {3, 3});
  ZeroTestConfig cfg = sampling_config(g, base);
  Expression F = *radial_harmonic(g, 1).closed_form;
  std::vector<ConjectureEntry> out;
  for (int k = k_min; k <= k_max; ++k) {
    ConjectureEntry entry;
    entry.k = k;
    try {
      Expression lap = simplify(pow(radius(), k) * F);
      for (int i = 0; i < k; ++i) lap = iterated_laplacian(lap, g, 1);
      entry.below = is_zero(lap, cfg);
      Expression top = iterated_laplacian(lap, g, 1);
      entry.top = is_zero(top, cfg);
      if (!entry.top->zero()) {
        double scale = 0;
        std::vector<Expression> terms{top};
        if (top.kind() == Kind::Sum) terms.assign(top.children().begin(), top.children().end());
        for (const auto& t : terms) scale = std::max(scale, std::fabs(evaluate(t, entry.top->witness)));
        entry.top_term_scale = scale;
      }
    } catch (const ExpressionBlowup& err) {
      entry.blowup = err.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

Expression euler_commutator_residual(const Expression& F, const SemiEuclidean& g) {
  return euler_commutator_residual(F, g, 1);
}

Expression euler_commutator_residual(const Expression& F, const SemiEuclidean& g, int s) {
  if (s < 1) throw std::invalid_argument("order must be at least 1");
  Expression lap_s = iterated_laplacian(F, g, s);
  Expression lhs = iterated_laplacian(euler_pairing(F, g), g, s);
  return simplify(lhs - n(2 * s) * lap_s - euler_pairing(lap_s, g));
}

ZeroVerdict lemma43_check(const Expression& F, const SemiEuclidean& g, int s, const ZeroTestConfig& cfg) {
  if (s < 1) throw PreconditionViolated("order must be at least 1");
  if (!is_zero(iterated_laplacian(F, g, s), cfg).zero()) {
    throw PreconditionViolated("F is not " + std::to_string(s) + "-harmonic");
  }
  Expression H = build_H(g, 1, 0);
  return is_zero(iterated_laplacian(simplify(H * laplacian(F, g)), g, s), cfg);
}

ProperIdentityReport properness_identity_check(const Expression& F, const SemiEuclidean& g, int s,
                                               const ZeroTestConfig& cfg) {
  if (s < 1) throw PreconditionViolated("order must be at least 1");
  cfg.validate();
  if (!is_zero(iterated_laplacian(F, g, s), cfg).zero()) {
    throw PreconditionViolated("F is not " + std::to_string(s) + "-harmonic");
  }
  Expression G = iterated_laplacian(F, g, s - 1);
  Expression E = euler_pairing(G, g);
  Expression L = iterated_laplacian(simplify(build_H(g, 1, 0) * F), g, s);

  struct Row {
    double g, e, l;
    Assignment at;
  };
  auto names = coordinate_names(g);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Row> rows;
  for (int attempt = 0; attempt < 4 * cfg.samples && static_cast<int>(rows.size()) < cfg.samples; ++attempt) {
    Assignment at;
    for (const auto& name : names) at[name] = draw(cfg.region_for(name), rng);
    try {
      rows.push_back({evaluate(G, at), evaluate(E, at), evaluate(L, at), at});
    } catch (const DomainError&) {
    }
  }
  if (rows.size() < 3) throw AllSamplesSingular("too few evaluable sample points for the fit");

  ProperIdentityReport report;
  bool solved = false;
  std::size_t used_a = 0;
  std::size_t used_b = 1;
  // Full-rank pair first, resampling through up to eight pairs.
  for (std::size_t i = 0; i + 1 < rows.size() && i < 16 && !solved; i += 2) {
    const Row& a = rows[i];
    const Row& b = rows[i + 1];
    double det = a.g * b.e - a.e * b.g;
    double scale = std::fabs(a.g * b.e) + std::fabs(a.e * b.g);
    if (scale > 0 && std::fabs(det) > 1e-10 * scale) {
      report.c1 = (a.l * b.e - a.e * b.l) / det;
      report.c2 = (a.g * b.l - a.l * b.g) / det;
      used_a = i;
      used_b = i + 1;
      solved = true;
    }
  }
  if (!solved) {
    // Rank one: minimum-norm solution A^T b / |A|_F^2.
    const Row& a = rows[0];
    const Row& b = rows[1];
    double norm = a.g * a.g + a.e * a.e + b.g * b.g + b.e * b.e;
    if (norm == 0) throw FitDegenerate("both identity columns vanish at the sampled points");
    report.c1 = (a.g * a.l + b.g * b.l) / norm;
    report.c2 = (a.e * a.l + b.e * b.l) / norm;
    report.rank_deficient = true;
  }

  auto exact1 = snap(report.c1);
  auto exact2 = snap(report.c2);
  if (exact1 && exact2) {
    report.exact = std::make_pair(*exact1, *exact2);
    Expression residual = simplify(L - q(*exact1) * G - q(*exact2) * E);
    ZeroVerdict v = is_zero(residual, cfg);
    if (v.zero()) {
      report.verdict = v;
      return report;
    }
  }

  ZeroVerdict numeric;
  numeric.kind = VerdictKind::NumericallyZero;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == used_a || i == used_b) continue;
    const Row& row = rows[i];
    double residual = std::fabs(row.l - report.c1 * row.g - report.c2 * row.e);
    ++numeric.sample_count;
    numeric.max_abs_residual = std::max(numeric.max_abs_residual, residual);
    if (residual > cfg.tolerance * std::max(1.0, std::fabs(row.l))) {
      numeric.kind = VerdictKind::NonZero;
      numeric.witness = row.at;
      numeric.witness_value = residual;
      break;
    }
  }
  report.verdict = numeric;
  return report;
}

}  // namespace polyharm
