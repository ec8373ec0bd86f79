#pragma once

// H-builders, the s-harmonicity classifier, Almansi lifts and towers, and the
// probes built on them.

#include "polyharm/expr.hpp"
#include "polyharm/geometry.hpp"
#include "polyharm/operators.hpp"
#include "polyharm/zero_test.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace polyharm {

class ZeroLeadingCoefficient : public std::invalid_argument {
 public:
  ZeroLeadingCoefficient() : std::invalid_argument("H needs a non-zero leading coefficient c1") {}
};

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FitDegenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// c1 (sum x_i^2 - sum y_j^2) + c2 on R^{p,q}; c1 r^2 + c2 on the radial
/// families.
Expression build_H(const Geometry& g, const Rational& c1, const Rational& c2);

enum class Classification {
  Harmonic,        // Delta^s F = 0 at the minimal s, but F itself vanishes (s = 0)
  ProperHarmonic,  // Delta^s F = 0 and Delta^{s-1} F != 0
  NotHarmonicUpTo  // no zero up to s_max
};

struct OrderResult {
  int order = 0;
  Expression residual;
  ZeroVerdict verdict;
};

/// Orders are computed from 0 upward and stop at the first zero verdict, since
/// every higher power of the Laplacian then vanishes as well.
struct HarmonicityReport {
  std::vector<OrderResult> orders;
  Classification classification = Classification::NotHarmonicUpTo;
  int s = 0;  // minimal order, or s_max for NotHarmonicUpTo
  std::string geometry;
  ZeroTestConfig config;

  /// "proper 2-harmonic", "not 3-harmonic", "0-harmonic (identically zero)".
  std::string label() const;
  bool proper(int order) const { return classification == Classification::ProperHarmonic && s == order; }
  /// True when Delta^order F was found to vanish.
  bool harmonic_at(int order) const;
};

HarmonicityReport classify(const FunctionValue& F, const Geometry& g, int s_max, const ZeroTestConfig& cfg);

/// simplify(build_H(g, c1, c2) * F). A separated function keeps its
/// eigenvalues; H is radial so only the radial factor changes.
Expression almansi_lift(const Expression& F, const Geometry& g, const Rational& c1, const Rational& c2);
SeparatedFunction almansi_lift(const SeparatedFunction& F, const Geometry& g, const Rational& c1,
                               const Rational& c2);

/// H^s F, with H^s kept as a power.
Expression almansi_tower(const Expression& F, const SemiEuclidean& g, int s, const Rational& c1,
                         const Rational& c2);

/// F with f^{m-1} F' = c (f1^{p-1} f2^{q-1} F' = c on warped products),
/// normalized by F(anchor) = 0. The anchor is the domain midpoint, or r = 1 on
/// unbounded domains.
struct RadialHarmonic {
  Rational c;
  double anchor = 1;
  /// Present for the families with a known antiderivative.
  std::optional<Expression> closed_form;
  /// F' = c / f^{m-1}; always symbolic.
  Expression derivative;
  std::function<double(double)> value;
};

RadialHarmonic radial_harmonic(const Geometry& g, const Rational& c);

/// f^{m-1} F' - c, simplified; zero for every output of radial_harmonic.
Expression radial_harmonic_defect(const RadialHarmonic& F, const Geometry& g);

/// Delta of an expression in r and a placeholder for a numeric radial
/// harmonic. d/dr acts on the placeholder through F'.
Expression laplacian_with_harmonic(const Expression& e, const Geometry& g, const RadialHarmonic& F,
                                   std::string_view placeholder);

/// Variable name standing in for a radial harmonic without a closed form.
inline constexpr std::string_view kHarmonicPlaceholder = "Phi";

struct ProbeEntry {
  std::string label;
  Expression residual;
  ZeroVerdict verdict;
};

struct ProbeReport {
  std::string header;
  std::string geometry;
  Expression H;
  ZeroVerdict laplacian_of_H;
  ZeroVerdict bilaplacian_of_H;
  bool H_proper_biharmonic = false;
  std::vector<ProbeEntry> lifts;
  bool passed = false;
  /// First failing item when !passed.
  std::optional<std::string> failure;
  std::optional<ZeroVerdict> failure_verdict;
};

ProbeReport weak_almansi_probe(const Model& g, const Expression& H, const ZeroTestConfig& cfg);

struct ConjectureEntry {
  int k = 0;
  std::optional<ZeroVerdict> top;    // Delta^{k+1}(r^k F)
  std::optional<ZeroVerdict> below;  // Delta^k(r^k F)
  /// When top is NonZero: largest |summand| of the residual at the witness,
  /// to tell cancellation noise from a genuine value.
  double top_term_scale = 0;
  std::optional<std::string> blowup;
};

/// Evidence only: on spherical-join(3,3) with F the radial harmonic for c = 1,
/// reports verdicts of Delta^{k+1}(r^k F) and Delta^k(r^k F) for k = k_min..k_max.
/// Requires 1 <= k_min <= k_max <= 4.
std::vector<ConjectureEntry> conjecture_probe(int k_max, const ZeroTestConfig& cfg, int k_min = 1);

/// Delta(w.grad F) - 2 Delta F - w.grad(Delta F).
Expression euler_commutator_residual(const Expression& F, const SemiEuclidean& g);
/// Delta^s(w.grad F) - 2 s Delta^s F - w.grad(Delta^s F).
Expression euler_commutator_residual(const Expression& F, const SemiEuclidean& g, int s);

/// Verdict of Delta^s(H Delta F) with H = sum x^2 - sum y^2. Throws
/// PreconditionViolated unless Delta^s F vanishes.
ZeroVerdict lemma43_check(const Expression& F, const SemiEuclidean& g, int s, const ZeroTestConfig& cfg);

struct ProperIdentityReport {
  double c1 = 0;
  double c2 = 0;
  /// The two-point system stayed rank one after resampling; the
  /// minimum-norm solution was used.
  bool rank_deficient = false;
  /// Fitted constants snapped to small rationals, when they were close.
  std::optional<std::pair<Rational, Rational>> exact;
  ZeroVerdict verdict;
};

/// Fits Delta^s(H F) = c1 Delta^{s-1} F + c2 w.grad(Delta^{s-1} F) at two
/// sampled points (H = sum x^2 - sum y^2) and checks the fit everywhere
/// else. Throws PreconditionViolated unless Delta^s F vanishes, FitDegenerate
/// when both columns vanish at every sampled pair.
ProperIdentityReport properness_identity_check(const Expression& F, const SemiEuclidean& g, int s,
                                               const ZeroTestConfig& cfg);

}  // namespace polyharm
