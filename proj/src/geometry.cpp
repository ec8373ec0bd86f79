#include "polyharm/geometry.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace polyharm {

namespace {

constexpr double kConditionTolerance = 1e-6;
constexpr int kPositivitySamples = 64;
// Unbounded domains are probed on (lo, lo + kProbeSpan).
constexpr double kProbeSpan = 10.0;

void require_radial(const Expression& f, const char* what) {
  for (const auto& v : free_variables(f)) {
    if (v != "r") throw GeometryError(std::string(what) + " must be an expression in r, found '" + v + "'");
  }
}

std::vector<double> interior_points(const Domain& d, int n) {
  double hi = d.bounded() ? d.hi : d.lo + kProbeSpan;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(d.lo + (hi - d.lo) * (i + 0.5) / n);
  return out;
}

double min_on_domain(const Expression& f, const Domain& d) {
  double lowest = std::numeric_limits<double>::infinity();
  for (double r : interior_points(d, kPositivitySamples)) {
    double v = -std::numeric_limits<double>::infinity();
    try {
      v = evaluate(f, {{"r", r}});
    } catch (const DomainError&) {
    }
    lowest = std::min(lowest, v);
  }
  return lowest;
}

void require_positive(const Expression& f, const Domain& d, const char* what) {
  require_radial(f, what);
  if (!(d.hi > d.lo)) throw GeometryError("empty domain");
  double lowest = min_on_domain(f, d);
  if (!(lowest > 0)) {
    throw GeometryError(std::string(what) + " is not positive on the domain (min sampled value " +
                        std::to_string(lowest) + ")");
  }
}

Expression nth_derivative(Expression e, int n) {
  for (int i = 0; i < n; ++i) e = differentiate(e, "r");
  return e;
}

ConditionCheck condition(std::string name, double measured, double required) {
  return {std::move(name), measured, required, std::fabs(measured - required) <= kConditionTolerance};
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string number_text(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

GeometrySpecError::GeometrySpecError(int line, std::string key, const std::string& message)
    : GeometryError("line " + std::to_string(line) + ", key '" + key + "': " + message),
      line_(line),
      key_(std::move(key)) {}

Model make_model(Expression f, int m, Domain domain) {
  if (m < 2) throw GeometryError("model dimension m must be at least 2");
  f = simplify(f);
  require_positive(f, domain, "warping function f");
  return Model{std::move(f), m, domain};
}

WarpedProduct make_warped(Expression f1, Expression f2, int p, int q, Domain domain) {
  if (p < 2 || q < 2) throw GeometryError("warped product dimensions p, q must be at least 2");
  f1 = simplify(f1);
  f2 = simplify(f2);
  require_positive(f1, domain, "warping function f1");
  require_positive(f2, domain, "warping function f2");
  return WarpedProduct{std::move(f1), std::move(f2), p, q, domain};
}

SemiEuclidean make_semi_euclidean(int p, int q) {
  if (p < 1) throw GeometryError("semi-Euclidean space needs p >= 1");
  if (q < 0) throw GeometryError("semi-Euclidean space needs q >= 0");
  return SemiEuclidean{p, q};
}

Geometry catalog(std::string_view name, const std::vector<int>& dims) {
  const Expression r = Expression::variable("r");
  const double inf = std::numeric_limits<double>::infinity();
  auto need = [&](std::size_t n) {
    if (dims.size() != n) {
      throw GeometryError("catalog geometry '" + std::string(name) + "' takes " + std::to_string(n) +
                          " dimension(s), got " + std::to_string(dims.size()));
    }
  };
  if (name == "euclidean") {
    need(1);
    return make_model(r, dims[0], {0, inf});
  }
  if (name == "hyperbolic") {
    need(1);
    return make_model(sinh(r), dims[0], {0, inf});
  }
  if (name == "sphere") {
    need(1);
    return make_model(sin(r), dims[0], {0, std::numbers::pi});
  }
  if (name == "spherical-join") {
    need(2);
    return make_warped(sin(r), cos(r), dims[0], dims[1], {0, std::numbers::pi / 2});
  }
  if (name == "hyperbolic-join") {
    need(2);
    return make_warped(sinh(r), cosh(r), dims[0], dims[1], {0, inf});
  }
  if (name == "cylinder") {
    need(2);
    return make_warped(r, Expression::integer(1), dims[0], dims[1], {0, inf});
  }
  if (name == "semi-euclidean" || name == "semieuclidean") {
    need(2);
    return make_semi_euclidean(dims[0], dims[1]);
  }
  throw GeometryError("unknown catalog geometry '" + std::string(name) + "'");
}

Geometry catalog_from_string(std::string_view text) {
  std::string s = trim(text);
  if (s.rfind("catalog:", 0) == 0) s = s.substr(8);
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != s.size()) {
    throw GeometryError("expected name(d1[,d2]) in '" + std::string(text) + "'");
  }
  std::string name = trim(s.substr(0, open));
  std::vector<int> dims;
  std::stringstream args(s.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(args, item, ',')) {
    std::string t = trim(item);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) throw GeometryError("bad dimension '" + t + "'");
    dims.push_back(v);
  }
  return catalog(name, dims);
}

Geometry parse_geometry_spec(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;
  std::stringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  static const std::set<std::string, std::less<>> kKeys = {"type", "f", "m", "f1", "f2", "p", "q", "domain"};
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw GeometrySpecError(line_no, trim(line), "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) throw GeometrySpecError(line_no, key, "unknown key");
    if (entries.count(key)) throw GeometrySpecError(line_no, key, "duplicate key");
    if (value.empty()) throw GeometrySpecError(line_no, key, "missing value");
    entries[key] = {value, line_no};
  }

  auto get = [&](const std::string& key) -> const Entry& {
    auto it = entries.find(key);
    if (it == entries.end()) throw GeometrySpecError(line_no, key, "required key is missing");
    return it->second;
  };
  auto integer = [&](const std::string& key) {
    const Entry& e = get(key);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(e.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != e.value.size()) throw GeometrySpecError(e.line, key, "expected an integer");
    return v;
  };
  auto expression = [&](const std::string& key) {
    const Entry& e = get(key);
    try {
      return parse(e.value);
    } catch (const ParseError& err) {
      throw GeometrySpecError(e.line, key, err.what());
    }
  };
  auto scalar = [&](const Entry& e, const std::string& key, std::string text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    try {
      return evaluate(parse(text), {});
    } catch (const std::exception& err) {
      throw GeometrySpecError(e.line, key, std::string("bad domain bound: ") + err.what());
    }
  };
  auto domain = [&](Domain fallback) {
    auto it = entries.find("domain");
    if (it == entries.end()) return fallback;
    const Entry& e = it->second;
    std::string v = e.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']' || v.find(',') == std::string::npos) {
      throw GeometrySpecError(e.line, "domain", "expected [a, b]");
    }
    auto comma = v.find(',');
    Domain d{scalar(e, "domain", v.substr(1, comma - 1)), scalar(e, "domain", v.substr(comma + 1, v.size() - comma - 2))};
    if (!(d.hi > d.lo)) throw GeometrySpecError(e.line, "domain", "empty interval");
    return d;
  };
  auto wrap = [&](const std::string& key, auto&& make) {
    try {
      return make();
    } catch (const GeometrySpecError&) {
      throw;
    } catch (const GeometryError& err) {
      throw GeometrySpecError(get(key).line, key, err.what());
    }
  };

  const Entry& type = get("type");
  if (type.value == "model") {
    return wrap("f", [&] { return Geometry(make_model(expression("f"), integer("m"), domain({}))); });
  }
  if (type.value == "warped") {
    return wrap("f1", [&] {
      return Geometry(make_warped(expression("f1"), expression("f2"), integer("p"), integer("q"), domain({})));
    });
  }
  if (type.value == "semieuclidean") {
    return wrap("p", [&] { return Geometry(make_semi_euclidean(integer("p"), integer("q"))); });
  }
  throw GeometrySpecError(type.line, "type", "expected model, warped or semieuclidean");
}

Geometry load_geometry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open geometry file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_geometry_spec(buf.str());
}

std::string describe(const Geometry& g) {
  std::ostringstream os;
  if (const auto* m = std::get_if<Model>(&g)) {
    os << "model f=" << format(m->f) << " m=" << m->m << " domain=(" << number_text(m->domain.lo) << ", "
       << number_text(m->domain.hi) << ")";
  } else if (const auto* w = std::get_if<WarpedProduct>(&g)) {
    os << "warped f1=" << format(w->f1) << " f2=" << format(w->f2) << " p=" << w->p << " q=" << w->q
       << " domain=(" << number_text(w->domain.lo) << ", " << number_text(w->domain.hi) << ")";
  } else {
    const auto& s = std::get<SemiEuclidean>(g);
    os << "semieuclidean p=" << s.p << " q=" << s.q;
  }
  return os.str();
}

std::vector<std::string> coordinate_names(const SemiEuclidean& g) {
  std::vector<std::string> out;
  for (int i = 1; i <= g.p; ++i) out.push_back("x" + std::to_string(i));
  for (int j = 1; j <= g.q; ++j) out.push_back("y" + std::to_string(j));
  return out;
}

std::pair<Expression, std::vector<std::pair<std::string, std::string>>> resolve_coordinate_aliases(
    const Expression& e, const SemiEuclidean& g) {
  static const char* kAliases[] = {"x", "y", "z"};
  auto names = coordinate_names(g);
  Expression out = e;
  std::vector<std::pair<std::string, std::string>> renamed;
  for (std::size_t i = 0; i < 3 && i < names.size(); ++i) {
    if (!depends_on(e, kAliases[i])) continue;
    out = substitute(out, kAliases[i], Expression::variable(names[i]));
    renamed.emplace_back(kAliases[i], names[i]);
  }
  return {out, renamed};
}

ZeroTestConfig sampling_config(const Geometry& g, ZeroTestConfig base) {
  auto clip = [&](const Domain& d) {
    std::vector<Interval> region;
    for (const auto& iv : base.radial_default) {
      Interval c{std::max(iv.lo, d.lo + 0.05), std::min(iv.hi, d.hi - 0.05)};
      if (c.hi > c.lo) region.push_back(c);
    }
    if (region.empty()) {
      double hi = d.bounded() ? d.hi : d.lo + kProbeSpan;
      double margin = 0.05 * (hi - d.lo);
      region.push_back({d.lo + margin, hi - margin});
    }
    base.radial_default = region;
  };
  if (const auto* m = std::get_if<Model>(&g)) clip(m->domain);
  if (const auto* w = std::get_if<WarpedProduct>(&g)) clip(w->domain);
  return base;
}

bool ValidationReport::passed() const { return first_failure() == nullptr; }

const ConditionCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

double value_at_endpoint(const Expression& e, double at, double direction) {
  try {
    return evaluate(e, {{"r", at}});
  } catch (const DomainError&) {
  }
  // Richardson step for an O(h) limit: 2 v(h/2) - v(h).
  double far = evaluate(e, {{"r", at + direction * 1e-4}});
  double near = evaluate(e, {{"r", at + direction * 5e-5}});
  return 2 * near - far;
}

ValidationReport validate_model(const Model& g) {
  ValidationReport report;
  std::vector<Expression> derivs{g.f};
  for (int k = 1; k <= 6; ++k) derivs.push_back(differentiate(derivs.back(), "r"));
  auto at = [&](int order, double where, double dir) {
    try {
      return value_at_endpoint(derivs[static_cast<std::size_t>(order)], where, dir);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  report.checks.push_back(condition("f(0)=0", at(0, g.domain.lo, 1), 0));
  report.checks.push_back(condition("f'(0)=1", at(1, g.domain.lo, 1), 1));
  double lowest = min_on_domain(g.f, g.domain);
  report.checks.push_back({"f>0", lowest, 0, lowest > 0});
  for (int k = 1; k <= 3; ++k) {
    report.checks.push_back(condition("f^(" + std::to_string(2 * k) + ")(0)=0", at(2 * k, g.domain.lo, 1), 0));
  }
  if (g.domain.bounded()) {
    double b = g.domain.hi;
    report.checks.push_back(condition("f(b)=0", at(0, b, -1), 0));
    report.checks.push_back(condition("f'(b)=-1", at(1, b, -1), -1));
    for (int k = 1; k <= 3; ++k) {
      report.checks.push_back(condition("f^(" + std::to_string(2 * k) + ")(b)=0", at(2 * k, b, -1), 0));
    }
  }
  return report;
}

ValidationReport check_pole_smoothness(const Expression& h) {
  ValidationReport report;
  Expression d = simplify(h);
  for (int order = 1; order <= 5; ++order) {
    d = differentiate(d, "r");
    if (order % 2 == 0) continue;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = value_at_endpoint(d, 0, 1);
    } catch (const DomainError&) {
    }
    report.checks.push_back(condition("H^(" + std::to_string(order) + ")(0)=0", v, 0));
  }
  return report;
}

Expression radial_curvature(const Model& g) {
  Expression f2 = nth_derivative(g.f, 2);
  return simplify(Expression::negate(Expression::quotient(f2, g.f)));
}

}  // namespace polyharm
