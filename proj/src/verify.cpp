#include "polyharm/verify.hpp"

#include "polyharm/oracle.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polyharm {

namespace {

constexpr std::uint64_t kCorpusSeed = 0x504F4C59;
constexpr int kPolynomialsPerGeometry = 50;

Expression r_var() { return Expression::variable("r"); }
Expression n(long v) { return Expression::integer(v); }

const std::vector<std::pair<int, int>>& flat_signatures() {
  static const std::vector<std::pair<int, int>> sigs{{2, 0}, {1, 1}, {2, 1}, {3, 0}};
  return sigs;
}

// Runs must-vanish and must-not-vanish tests for one check and folds them
// into its record.
class Check {
 public:
  Check(CheckRecord& record, ZeroTestConfig cfg, bool faulted)
      : record_(record), cfg_(std::move(cfg)), faulted_(faulted) {}

  const ZeroTestConfig& cfg() const { return cfg_; }

  bool zero(const std::string& what, const Expression& e, const ZeroTestConfig* cfg = nullptr,
            const std::vector<DerivedVariable>& derived = {}) {
    ZeroVerdict v = test(e, cfg, derived);
    record_.max_abs_residual = std::max(record_.max_abs_residual, v.zero() ? v.max_abs_residual : v.witness_value);
    if (v.zero()) return true;
    note_witness(v);
    return fail(what + ": " + describe(v));
  }

  /// Must vanish through the exact tier.
  bool proven(const std::string& what, const Expression& e) {
    ZeroVerdict v = test(e, nullptr, {});
    if (v.kind == VerdictKind::ProvenZero) return true;
    record_.max_abs_residual = std::max(record_.max_abs_residual, v.zero() ? v.max_abs_residual : v.witness_value);
    if (!v.zero()) note_witness(v);
    return fail(what + ": expected ProvenZero, got " + describe(v));
  }

  bool nonzero(const std::string& what, const Expression& e, const ZeroTestConfig* cfg = nullptr) {
    ZeroVerdict v = is_zero(e, cfg ? *cfg : cfg_);
    if (!v.zero()) {
      note_witness(v);
      return true;
    }
    return fail(what + ": expected a non-zero witness, got " + describe(v));
  }

  bool expect(bool condition, const std::string& what) { return condition || fail(what); }

  bool fail(const std::string& why) {
    if (record_.verdict != CheckVerdict::EvidenceOnly) record_.verdict = CheckVerdict::Fail;
    record_.notes.push_back("FAIL " + why);
    return false;
  }

  void note(std::string line) { record_.notes.push_back(std::move(line)); }

  /// Records a verdict without judging it.
  void track(const ZeroVerdict& v) {
    if (v.zero()) {
      record_.max_abs_residual = std::max(record_.max_abs_residual, v.max_abs_residual);
    } else {
      note_witness(v);
    }
  }

  void note_witness(const ZeroVerdict& v) {
    if (!record_.witness && v.kind == VerdictKind::NonZero) record_.witness = Witness{v.witness, v.witness_value};
  }

 private:
  ZeroVerdict test(const Expression& e, const ZeroTestConfig* cfg, const std::vector<DerivedVariable>& derived) {
    Expression target = faulted_ ? simplify(e + Expression::constant(Rational(1, 1000))) : e;
    return is_zero(target, cfg ? *cfg : cfg_, derived);
  }

  CheckRecord& record_;
  ZeroTestConfig cfg_;
  bool faulted_;
};

Expression bar_F() { return parse("(4*r - sin(4*r))/sin(2*r)^2"); }

SemiEuclidean flat(int p, int q) { return make_semi_euclidean(p, q); }

std::string flat_name(const SemiEuclidean& g) {
  return "R^{" + std::to_string(g.p) + "," + std::to_string(g.q) + "}";
}

void p01(Check& c) {
  for (int p = 2; p <= 5; ++p) {
    for (int q = 2; q <= 5; ++q) {
      auto g = std::get<WarpedProduct>(catalog("spherical-join", {p, q}));
      Expression expected = n(p - 1) * cot(r_var()) - n(q - 1) * tan(r_var());
      c.zero("join(" + std::to_string(p) + "," + std::to_string(q) + ")",
             simplify(warped_radial_laplacian(r_var(), g) - expected));
    }
  }
}

void p02(Check& c) {
  for (const char* name : {"spherical-join", "hyperbolic-join"}) {
    Geometry g = catalog(name, {3, 3});
    ZeroTestConfig cfg = sampling_config(g, c.cfg());
    c.zero(std::string(name) + "(3,3)", iterated_laplacian(r_var(), g, 2), &cfg);
  }
}

void p03(Check& c) {
  int zeros = 0;
  for (int p = 2; p <= 5; ++p) {
    for (int q = 2; q <= 5; ++q) {
      Geometry g = catalog("spherical-join", {p, q});
      Expression bilap = iterated_laplacian(r_var(), g, 2);
      std::string what = "join(" + std::to_string(p) + "," + std::to_string(q) + ")";
      if (p == 3 && q == 3) {
        if (c.zero(what, bilap)) ++zeros;
      } else {
        c.nonzero(what, bilap);
      }
    }
  }
  c.note("bilaplacian of r vanishes on " + std::to_string(zeros) + " of 16 joins");
}

void p04(Check& c) {
  Geometry g = catalog("spherical-join", {3, 3});
  ZeroTestConfig cfg = c.cfg().with_region("r", {{0.05, std::numbers::pi / 2 - 0.05}});
  c.zero("separated residual of F", laplacian(make_separated(bar_F(), -2, -2, true), g), &cfg);
}

void p05(Check& c) {
  for (const char* name : {"spherical-join", "hyperbolic-join"}) {
    Geometry g = catalog(name, {3, 3});
    ZeroTestConfig cfg = sampling_config(g, c.cfg());
    for (long k : {1L, -1L, 2L}) {
      RadialHarmonic F = radial_harmonic(g, k);
      std::string what = std::string(name) + " c=" + std::to_string(k);
      c.zero(what + " harmonic defect", radial_harmonic_defect(F, g), &cfg);
      Expression lifted = simplify(r_var() * *F.closed_form);
      Expression lap = iterated_laplacian(lifted, g, 1);
      c.zero(what + " bilaplacian of rF", iterated_laplacian(lap, g, 1), &cfg);
      c.nonzero(what + " laplacian of rF", lap, &cfg);
    }
  }
}

void p06(Check& c) {
  Geometry g = catalog("spherical-join", {3, 3});
  Expression residual = iterated_laplacian(make_separated(r_var() * bar_F(), -2, -2, true), g, 2);
  Expression target = parse("64*cot(2*r)*csc(2*r)^4*(sin(4*r) - 4*r)");
  c.zero("residual minus closed form", simplify(residual - target));
  c.nonzero("residual", residual);
}

template <typename Fn>
void over_random_polynomials(Fn&& fn) {
  std::mt19937_64 rng(kCorpusSeed);
  for (auto [p, q] : flat_signatures()) {
    SemiEuclidean g = flat(p, q);
    for (int i = 0; i < kPolynomialsPerGeometry; ++i) {
      Expression F = random_polynomial(g, 6, 1 + static_cast<int>(rng() % 6), rng);
      fn(g, F);
    }
  }
}

void p07(Check& c) {
  int count = 0;
  over_random_polynomials([&](const SemiEuclidean& g, const Expression& F) {
    ++count;
    c.proven(flat_name(g) + " F=" + format(F), euler_commutator_residual(F, g));
  });
  c.note(std::to_string(count) + " random polynomials");
}

void p08(Check& c) {
  int count = 0;
  over_random_polynomials([&](const SemiEuclidean& g, const Expression& F) {
    for (int s : {2, 3}) {
      ++count;
      c.proven(flat_name(g) + " s=" + std::to_string(s) + " F=" + format(F), euler_commutator_residual(F, g, s));
    }
  });
  c.note(std::to_string(count) + " polynomial/order pairs");
}

void p09(Check& c) {
  int count = 0;
  over_random_polynomials([&](const SemiEuclidean& g, const Expression& F) {
    int s = polynomial_degree(F) / 2 + 1;
    std::string what = flat_name(g) + " s=" + std::to_string(s) + " F=" + format(F);
    if (!proven_zero(iterated_laplacian(F, g, s))) {
      c.fail(what + ": F is not s-harmonic");
      return;
    }
    ++count;
    Expression H = build_H(g, 1, 0);
    c.proven(what, iterated_laplacian(simplify(H * laplacian(F, g)), g, s));
  });
  c.note(std::to_string(count) + " random polynomials");
}

struct CorpusEntry {
  std::string function;
  std::vector<std::pair<int, int>> geometries;
  bool proper_lift;
};

const std::vector<CorpusEntry>& harmonic_corpus() {
  static const std::vector<CorpusEntry> corpus{
      {"x1", {{2, 0}, {3, 0}, {1, 1}, {2, 1}}, true},
      {"x1*x2", {{2, 0}, {3, 0}, {2, 1}}, true},
      {"x1^2 - x2^2", {{2, 0}, {3, 0}, {2, 1}}, true},
      {"x1*y1", {{1, 1}, {2, 1}}, true},
      {"x1^2 + y1^2", {{1, 1}}, true},
      {"x1/(x1^2 + x2^2)", {{2, 0}}, false},
      {"x1/(x1^2 - y1^2)", {{1, 1}}, false},
  };
  return corpus;
}

void p10(Check& c) {
  int lifts = 0;
  for (const auto& entry : harmonic_corpus()) {
    Expression F = parse(entry.function);
    for (auto [p, q] : entry.geometries) {
      SemiEuclidean g = flat(p, q);
      std::string base = entry.function + " on " + flat_name(g);
      c.zero(base + " is harmonic", laplacian(F, g));
      for (auto [c1, c2] : {std::pair<long, long>{1, 0}, {2, -3}}) {
        ++lifts;
        Expression G = almansi_lift(F, g, c1, c2);
        std::string what = base + " H=" + format(build_H(g, c1, c2));
        Expression lap = laplacian(G, g);
        c.zero(what + " bilaplacian", laplacian(lap, g));
        if (entry.proper_lift) {
          c.nonzero(what + " laplacian", lap);
        } else {
          c.zero(what + " laplacian", lap);
        }
      }
    }
  }
  c.note(std::to_string(lifts) + " lifts classified");
}

void p11(Check& c) {
  for (int p : {2, 3}) {
    SemiEuclidean g = flat(p, 0);
    for (int s = 1; s <= 3; ++s) {
      Expression G = almansi_tower(parse("x1"), g, s, 1, 0);
      std::string what = "H^" + std::to_string(s) + " x1 on " + flat_name(g);
      Expression below = iterated_laplacian(G, g, s);
      c.nonzero(what + " order " + std::to_string(s), below);
      c.zero(what + " order " + std::to_string(s + 1), laplacian(below, g));
    }
  }
}

void p12(Check& c) {
  for (auto [text, sig] : {std::pair<const char*, std::pair<int, int>>{"x1/(x1^2 + x2^2)", {2, 0}},
                          {"x1/(x1^2 - y1^2)", {1, 1}}}) {
    SemiEuclidean g = flat(sig.first, sig.second);
    Expression F = parse(text);
    std::string what = std::string(text) + " on " + flat_name(g);
    c.nonzero(what + " itself", F);
    c.zero(what + " harmonic", laplacian(F, g));
    Expression G = almansi_lift(F, g, 1, 0);
    c.zero(what + " lift equals x1", simplify(G - parse("x1")));
    Expression lap = laplacian(G, g);
    c.zero(what + " lift harmonic", lap);
    c.zero(what + " lift biharmonic", laplacian(lap, g));
  }
}

void weak_probe_entries(Check& c, const Model& g, const ProbeReport& report, bool expect_pass) {
  ZeroTestConfig cfg = sampling_config(g, c.cfg());
  for (long k : {1L, -1L, 2L}) {
    RadialHarmonic F = radial_harmonic(g, k);
    c.zero(report.geometry + " harmonic defect c=" + std::to_string(k), radial_harmonic_defect(F, g), &cfg);
  }
  if (expect_pass) {
    c.expect(report.H_proper_biharmonic, report.geometry + ": H not proper biharmonic");
    for (const auto& entry : report.lifts) {
      if (depends_on(entry.residual, kHarmonicPlaceholder)) {
        c.expect(entry.verdict.zero(), report.geometry + " " + entry.label + ": " + describe(entry.verdict));
      } else {
        c.zero(report.geometry + " " + entry.label, entry.residual, &cfg);
      }
    }
    c.expect(report.passed, report.geometry + ": probe did not pass");
  } else {
    bool witnessed = !report.passed && report.failure_verdict && report.failure_verdict->kind == VerdictKind::NonZero;
    c.expect(witnessed, report.geometry + ": probe did not fail with a witness");
    if (report.failure_verdict) c.note_witness(*report.failure_verdict);
    if (report.failure) c.note(report.geometry + ": " + *report.failure);
  }
}

void p13(Check& c) {
  for (int m : {3, 4}) {
    Model g = std::get<Model>(catalog("euclidean", {m}));
    weak_probe_entries(c, g, weak_almansi_probe(g, parse("r^2"), c.cfg()), true);
  }
}

void p14(Check& c) {
  for (const char* name : {"hyperbolic", "sphere"}) {
    Model g = std::get<Model>(catalog(name, {3}));
    weak_probe_entries(c, g, weak_almansi_probe(g, parse("r^2"), c.cfg()), false);
  }
}

void p15(Check& c) {
  for (auto [p, q] : flat_signatures()) {
    SemiEuclidean g = flat(p, q);
    Expression H = build_H(g, 1, 0);
    auto grad = pq_gradient(H, g);
    auto names = coordinate_names(g);
    for (std::size_t i = 0; i < names.size(); ++i) {
      c.zero(flat_name(g) + " gradient " + names[i], simplify(grad[i] - n(2) * Expression::variable(names[i])));
    }
    c.zero(flat_name(g) + " laplacian", simplify(laplacian(H, g) - n(2 * (p + q))));
  }
}

void p16(Check& c) {
  SemiEuclidean g = flat(1, 1);
  Expression F = parse("-(x1^2 + y1^2)");
  c.zero("laplacian on R^{1,1}", laplacian(F, g));
  c.nonzero("Euclidean laplacian of the same form", laplacian(parse("-(x1^2 + x2^2)"), flat(2, 0)));
}

void c01(Check& c) {
  for (const auto& entry : conjecture_probe(4, c.cfg(), 2)) {
    std::string k = std::to_string(entry.k);
    if (entry.blowup) {
      c.note("k=" + k + ": not computed (" + *entry.blowup + ")");
      continue;
    }
    std::string line = "k=" + k + ": order " + std::to_string(entry.k + 1) + " " + describe(*entry.top);
    if (!entry.top->zero() && entry.top_term_scale > 0) {
      std::ostringstream os;
      os << " [largest summand " << entry.top_term_scale << ", ratio "
         << entry.top->witness_value / entry.top_term_scale << "]";
      line += os.str();
    }
    c.note(line + "; order " + k + " " + describe(*entry.below));
    c.track(*entry.top);
  }
}

using CheckFn = void (*)(Check&);

const std::vector<CheckFn>& check_functions() {
  static const std::vector<CheckFn> fns{p01, p02, p03, p04, p05, p06, p07, p08, p09,
                                        p10, p11, p12, p13, p14, p15, p16, c01};
  return fns;
}

int degree_of(const Expression& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Pi:
      return 0;
    case Kind::Variable:
      return 1;
    case Kind::Negate:
      return degree_of(e.child(0));
    case Kind::Sum: {
      int d = 0;
      for (const auto& c : e.children()) d = std::max(d, degree_of(c));
      return d;
    }
    case Kind::Product: {
      int d = 0;
      for (const auto& c : e.children()) d += degree_of(c);
      return d;
    }
    case Kind::Power:
      if (e.exponent().get_den() == 1 && e.exponent() >= 0) {
        return static_cast<int>(e.exponent().get_num().get_si()) * degree_of(e.child(0));
      }
      break;
    default:
      break;
  }
  throw std::invalid_argument("not a polynomial: " + print(e));
}

nlohmann::ordered_json point_json(const Assignment& a) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : a) out[k] = v;
  return out;
}

}  // namespace

std::string_view check_verdict_name(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::Pass:
      return "pass";
    case CheckVerdict::Fail:
      return "fail";
    case CheckVerdict::EvidenceOnly:
      break;
  }
  return "evidence-only";
}

const std::vector<std::pair<std::string, std::string>>& verify_check_ids() {
  static const std::vector<std::pair<std::string, std::string>> ids{
      {"P01", "eq3.8-first-laplacian"},
      {"P02", "lemma3.1-p3q3-bilaplacian-zero"},
      {"P03", "lemma3.1-dichotomy-scan"},
      {"P04", "eq3.11-harmonic-solution"},
      {"P05", "thm3.2i-lift-proper-biharmonic"},
      {"P06", "thm3.2ii-counterexample-residual"},
      {"P07", "lemma4.1-identity"},
      {"P08", "lemma4.2-identity"},
      {"P09", "lemma4.3-identity"},
      {"P10", "almansi-lift-corpus"},
      {"P11", "tower-remark"},
      {"P12", "final-remark-examples"},
      {"P13", "weak-almansi-euclidean-pass"},
      {"P14", "weak-almansi-sinh-sin-fail"},
      {"P15", "eq4.4-gradient-and-laplacian-of-H"},
      {"P16", "r11-maximum-principle-example"},
      {"C01", "conjecture-probe"},
  };
  return ids;
}

std::vector<CheckRecord> run_verify_suite(const VerifyOptions& options) {
  const auto& ids = verify_check_ids();
  if (options.inject_fault) {
    bool known = false;
    for (const auto& [id, anchor] : ids) known = known || id == *options.inject_fault;
    if (!known) throw std::invalid_argument("unknown check id '" + *options.inject_fault + "'");
  }
  ZeroTestConfig cfg = ZeroTestConfig{}.with_seed(options.seed);
  std::vector<CheckRecord> records;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CheckRecord record;
    record.id = ids[i].first;
    record.anchor = ids[i].second;
    if (record.id.front() == 'C') record.verdict = CheckVerdict::EvidenceOnly;
    auto start = std::chrono::steady_clock::now();
    Check check(record, cfg, options.inject_fault == record.id);
    try {
      check_functions()[i](check);
    } catch (const std::exception& err) {
      check.fail(std::string("internal error: ") + err.what());
    }
    record.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    records.push_back(std::move(record));
  }
  return records;
}

int verify_exit_code(const std::vector<CheckRecord>& records) {
  for (const auto& r : records) {
    if (r.verdict == CheckVerdict::Fail) return 1;
  }
  return 0;
}

Expression random_polynomial(const SemiEuclidean& g, int max_degree, int terms, std::mt19937_64& rng) {
  auto names = coordinate_names(g);
  std::vector<Expression> monomials;
  for (int t = 0; t < terms; ++t) {
    long coefficient = static_cast<long>(rng() % 10) - 5;
    if (coefficient >= 0) ++coefficient;
    int degree = static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree + 1));
    std::vector<int> exponents(names.size(), 0);
    for (int d = 0; d < degree; ++d) ++exponents[rng() % names.size()];
    std::vector<Expression> factors{n(coefficient)};
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (exponents[i] > 0) factors.push_back(pow(Expression::variable(names[i]), exponents[i]));
    }
    monomials.push_back(Expression::product(std::move(factors)));
  }
  return simplify(Expression::sum(std::move(monomials)));
}

int polynomial_degree(const Expression& e) { return degree_of(simplify(e)); }

nlohmann::ordered_json to_json(const ZeroVerdict& v) {
  nlohmann::ordered_json out;
  out["kind"] = std::string(verdict_name(v.kind));
  if (v.kind == VerdictKind::NonZero) {
    out["witness"] = {{"point", point_json(v.witness)}, {"value", v.witness_value}};
  } else if (v.kind == VerdictKind::NumericallyZero) {
    out["max_abs_residual"] = v.max_abs_residual;
    out["samples"] = v.sample_count;
  }
  return out;
}

nlohmann::ordered_json to_json(const HarmonicityReport& report) {
  nlohmann::ordered_json out;
  out["geometry"] = report.geometry;
  out["classification"] = report.label();
  out["s"] = report.s;
  out["seed"] = report.config.seed;
  out["samples"] = report.config.samples;
  out["tolerance"] = report.config.tolerance;
  out["orders"] = nlohmann::ordered_json::array();
  for (const auto& o : report.orders) {
    nlohmann::ordered_json entry;
    entry["order"] = o.order;
    entry["residual"] = format(o.residual);
    entry["verdict"] = to_json(o.verdict);
    out["orders"].push_back(entry);
  }
  return out;
}

nlohmann::ordered_json to_json(const ProbeReport& report) {
  nlohmann::ordered_json out;
  out["header"] = report.header;
  out["geometry"] = report.geometry;
  out["H"] = format(report.H);
  out["laplacian_of_H"] = to_json(report.laplacian_of_H);
  out["bilaplacian_of_H"] = to_json(report.bilaplacian_of_H);
  out["H_proper_biharmonic"] = report.H_proper_biharmonic;
  out["lifts"] = nlohmann::ordered_json::array();
  for (const auto& l : report.lifts) out["lifts"].push_back({{"F", l.label}, {"verdict", to_json(l.verdict)}});
  out["result"] = report.passed ? "PASS" : "FAIL";
  if (report.failure) out["failure"] = *report.failure;
  return out;
}

nlohmann::ordered_json verify_report_json(const std::vector<CheckRecord>& records, std::uint64_t seed) {
  nlohmann::ordered_json out;
  out["version"] = 1;
  out["seed"] = seed;
  out["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["anchor"] = r.anchor;
    c["verdict"] = std::string(check_verdict_name(r.verdict));
    c["max_abs_residual"] = r.max_abs_residual;
    if (r.witness) c["witness"] = {{"point", point_json(r.witness->point)}, {"value", r.witness->value}};
    c["ms"] = std::round(r.ms * 1000) / 1000;
    out["checks"].push_back(c);
  }
  return out;
}

}  // namespace polyharm
