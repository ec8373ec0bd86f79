// polyharm: Laplacians, polyharmonicity classification and Almansi lifts on
// model, warped-product and semi-Euclidean geometries.
//
// Exit codes: 0 ok, 1 failed verification, 2 bad input, 3 FD cross-check
// mismatch.

#include "polyharm/almansi.hpp"
#include "polyharm/oracle.hpp"
#include "polyharm/verify.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"

using namespace polyharm;

namespace {

struct Options {
  std::string geometry;
  std::string function;
  int order = 1;
  std::optional<std::string> lambda;
  std::optional<std::string> mu;
  bool fd_check = false;
  int max_order = 3;
  std::uint64_t seed = ZeroTestConfig{}.seed;
  int samples = ZeroTestConfig{}.samples;
  double tol = ZeroTestConfig{}.tolerance;
  bool json = false;
  int power = 1;
  std::string c1 = "1";
  std::string c2 = "0";
  std::optional<std::string> inject_fault;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Geometry load_geometry(const std::string& text) {
  if (text.empty()) throw InputError("--geometry is required");
  if (text.rfind("catalog:", 0) != 0 && std::filesystem::exists(text)) return load_geometry_file(text);
  return catalog_from_string(text);
}

Rational parse_rational(const std::string& text, const std::string& flag) {
  Expression e = simplify(parse(text));
  if (e.kind() != Kind::Constant) throw InputError(flag + " must be a rational number, got '" + text + "'");
  return e.value();
}

// The function as typed, mapped onto the geometry's canonical coordinates,
// plus a way back to the user's names for printing.
struct UserFunction {
  Expression canonical;
  std::vector<std::pair<std::string, std::string>> renames;

  std::string show(const Expression& e) const {
    Expression out = e;
    for (const auto& [from, to] : renames) out = substitute(out, to, Expression::variable(from));
    return format(out);
  }
};

UserFunction load_function(const std::string& text, const Geometry& g) {
  if (text.empty()) throw InputError("--function is required");
  Expression e = parse(text);
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    auto [renamed, renames] = resolve_coordinate_aliases(e, *s);
    auto names = coordinate_names(*s);
    bool canonical_used = false;
    for (const auto& v : free_variables(e)) {
      canonical_used = canonical_used || std::find(names.begin(), names.end(), v) != names.end();
    }
    if (!renames.empty() && !canonical_used) {
      // Print every coordinate under its alias, not only the ones F uses.
      static const char* kAliases[] = {"x", "y", "z"};
      renames.clear();
      for (std::size_t i = 0; i < 3 && i < names.size(); ++i) renames.emplace_back(kAliases[i], names[i]);
    }
    return {renamed, renames};
  }
  return {e, {}};
}

FunctionValue function_value(const UserFunction& F, const Geometry& g, const Options& opt) {
  if (!opt.lambda && !opt.mu) return F.canonical;
  if (!std::holds_alternative<WarpedProduct>(g)) {
    throw InputError("--lambda/--mu need a warped-product geometry");
  }
  Rational lambda = opt.lambda ? parse_rational(*opt.lambda, "--lambda") : Rational(0);
  Rational mu = opt.mu ? parse_rational(*opt.mu, "--mu") : Rational(0);
  return make_separated(F.canonical, lambda, mu);
}

ZeroTestConfig zero_config(const Options& opt, const Geometry& g) {
  ZeroTestConfig cfg;
  cfg.seed = opt.seed;
  cfg.samples = opt.samples;
  cfg.tolerance = opt.tol;
  cfg.validate();
  return sampling_config(g, cfg);
}

void print_verdict_line(std::ostream& os, const std::string& what, const ZeroVerdict& v) {
  os << what << describe(v) << "\n";
}

// Five interior points: evenly spaced across the radial sampling region, or
// seeded draws from the Cartesian region.
std::vector<std::vector<double>> fd_points(const Geometry& g, const ZeroTestConfig& cfg) {
  std::vector<std::vector<double>> points;
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < 5; ++i) {
      std::vector<double> point;
      for (const auto& name : coordinate_names(*s)) {
        const auto& region = cfg.region_for(name);
        const Interval& iv = region[rng() % region.size()];
        point.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng));
      }
      points.push_back(point);
    }
    return points;
  }
  const Interval& iv = cfg.region_for(cfg.radial_variable).front();
  for (int i = 0; i < 5; ++i) points.push_back({iv.lo + iv.length() * (i + 0.5) / 5});
  return points;
}

CrossCheckReport run_fd_check(const FunctionValue& F, const Geometry& g, int order, const Expression& symbolic,
                              const ZeroTestConfig& cfg) {
  FDConfig fd;
  Expression inner = iterated_laplacian(F, g, order - 1);
  auto points = fd_points(g, cfg);
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    auto names = coordinate_names(*s);
    PointEvaluator eval = point_evaluator(inner, names);
    return cross_check(symbolic, names,
                       [&](std::span<const double> x) { return fd_cartesian_laplacian(eval, *s, x, fd); }, points,
                       fd);
  }
  std::optional<Eigenvalues> eigen;
  if (const auto* sep = std::get_if<SeparatedFunction>(&F)) eigen = Eigenvalues{sep->lambda.get_d(), sep->mu.get_d()};
  RadialEvaluator eval = radial_evaluator(inner);
  return cross_check(symbolic, {"r"},
                     [&](std::span<const double> x) { return fd_radial_laplacian(eval, g, x[0], fd, eigen); },
                     points, fd);
}

int cmd_laplacian(const Options& opt) {
  if (opt.order < 0) throw InputError("--order must be non-negative");
  Geometry g = load_geometry(opt.geometry);
  UserFunction user = load_function(opt.function, g);
  FunctionValue F = function_value(user, g, opt);
  ZeroTestConfig cfg = zero_config(opt, g);
  Expression result = iterated_laplacian(F, g, opt.order);
  ZeroVerdict verdict = is_zero(result, cfg);

  std::optional<CrossCheckReport> fd;
  if (opt.fd_check && opt.order >= 1) fd = run_fd_check(F, g, opt.order, result, cfg);

  if (opt.json) {
    nlohmann::ordered_json out;
    out["geometry"] = describe(g);
    out["function"] = user.show(user.canonical);
    out["order"] = opt.order;
    out["result"] = user.show(result);
    out["verdict"] = to_json(verdict);
    if (fd) {
      out["fd_check"] = {{"points", fd->symbolic.size()},
                         {"max_relative_discrepancy", fd->max_relative_discrepancy},
                         {"passed", fd->passed}};
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << user.show(result) << "\n";
    print_verdict_line(std::cout, "verdict: ", verdict);
    if (fd) {
      std::cout << "fd-check: max relative discrepancy " << fd->max_relative_discrepancy << " over "
                << fd->symbolic.size() << " points: " << (fd->passed ? "pass" : "FAIL") << "\n";
    }
  }
  return fd && !fd->passed ? 3 : 0;
}

void print_report(const HarmonicityReport& report, const UserFunction& user) {
  std::cout << report.label() << "\n";
  for (const auto& o : report.orders) {
    std::cout << "  order " << o.order << ": " << describe(o.verdict) << "\n";
    std::cout << "    " << user.show(o.residual) << "\n";
  }
}

int cmd_classify(const Options& opt) {
  if (opt.max_order < 1) throw InputError("--max-order must be at least 1");
  Geometry g = load_geometry(opt.geometry);
  UserFunction user = load_function(opt.function, g);
  FunctionValue F = function_value(user, g, opt);
  HarmonicityReport report = classify(F, g, opt.max_order, zero_config(opt, g));
  if (opt.json) {
    std::cout << to_json(report).dump(2) << "\n";
  } else {
    print_report(report, user);
  }
  return 0;
}

int cmd_almansi(const Options& opt) {
  if (opt.power < 1) throw InputError("--power must be at least 1");
  Geometry g = load_geometry(opt.geometry);
  UserFunction user = load_function(opt.function, g);
  FunctionValue F = function_value(user, g, opt);
  Rational c1 = parse_rational(opt.c1, "--c1");
  Rational c2 = parse_rational(opt.c2, "--c2");
  Expression H = build_H(g, c1, c2);

  FunctionValue lifted;
  if (const auto* s = std::get_if<SemiEuclidean>(&g)) {
    lifted = almansi_tower(user.canonical, *s, opt.power, c1, c2);
  } else if (auto* sep = std::get_if<SeparatedFunction>(&F)) {
    sep->radial = simplify(pow(H, opt.power) * sep->radial);
    lifted = *sep;
  } else {
    require_coordinates(user.canonical, g);
    lifted = simplify(pow(H, opt.power) * user.canonical);
  }
  const Expression& G = std::holds_alternative<Expression>(lifted) ? std::get<Expression>(lifted)
                                                                   : std::get<SeparatedFunction>(lifted).radial;
  HarmonicityReport report = classify(lifted, g, opt.power + 2, zero_config(opt, g));
  if (opt.json) {
    nlohmann::ordered_json out;
    out["H"] = user.show(H);
    out["power"] = opt.power;
    out["lift"] = user.show(G);
    out["report"] = to_json(report);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "H = " << user.show(H) << "\n";
    std::cout << "H^" << opt.power << " F = " << user.show(G) << "\n";
    print_report(report, user);
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  VerifyOptions options;
  options.seed = opt.seed;
  options.inject_fault = opt.inject_fault;
  auto records = run_verify_suite(options);
  if (opt.json) {
    std::cout << verify_report_json(records, opt.seed).dump(2) << "\n";
  } else {
    for (const auto& r : records) {
      std::cout << r.id << " " << r.anchor << ": " << check_verdict_name(r.verdict)
                << "  max|residual| " << r.max_abs_residual << "  (" << static_cast<long>(r.ms) << " ms)\n";
      for (const auto& line : r.notes) std::cout << "    " << line << "\n";
    }
  }
  return verify_exit_code(records);
}

int cmd_validate(const Options& opt) {
  Geometry g = load_geometry(opt.geometry);
  std::cout << describe(g) << "\n";
  const auto* model = std::get_if<Model>(&g);
  if (!model) {
    std::cout << "warping functions positive on sampled interior points\n";
    return 0;
  }
  ValidationReport report = validate_model(*model);
  for (const auto& c : report.checks) {
    std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ": measured " << c.measured << ", required "
              << c.required << "\n";
  }
  std::cout << "curvature K(r) = " << format(radial_curvature(*model)) << "\n";
  return report.passed() ? 0 : 1;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.seed, "sampling seed");
  cmd->add_option("--samples", opt.samples, "zero-test sample count");
  cmd->add_option("--tol", opt.tol, "zero-test absolute tolerance");
  cmd->add_flag("--json", opt.json, "machine-readable output");
}

void add_function(CLI::App* cmd, Options& opt) {
  cmd->add_option("--geometry", opt.geometry, "spec file or catalog:name(dims)")->required();
  cmd->add_option("--function", opt.function, "expression in r, or in x1.., y1..")->required();
  cmd->add_option("--lambda", opt.lambda, "first sphere eigenvalue (separated function)");
  cmd->add_option("--mu", opt.mu, "second sphere eigenvalue (separated function)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyharmonic functions on model and semi-Euclidean geometries"};
  app.require_subcommand(1);
  Options opt;

  auto* lap = app.add_subcommand("laplacian", "print the s-fold Laplacian of a function");
  add_function(lap, opt);
  add_common(lap, opt);
  lap->add_option("--order", opt.order, "number of Laplacian applications");
  lap->add_flag("--fd-check", opt.fd_check, "cross-check against finite differences");

  auto* cls = app.add_subcommand("classify", "find the minimal s with Delta^s F = 0");
  add_function(cls, opt);
  add_common(cls, opt);
  cls->add_option("--max-order", opt.max_order, "largest s to try");

  auto* alm = app.add_subcommand("almansi", "build H^s F and classify it");
  add_function(alm, opt);
  add_common(alm, opt);
  alm->add_option("--power", opt.power, "exponent s of H");
  alm->add_option("--c1", opt.c1, "leading coefficient of H");
  alm->add_option("--c2", opt.c2, "constant term of H");

  auto* ver = app.add_subcommand("verify-paper", "run the fixed verification suite");
  ver->add_option("--seed", opt.seed, "sampling seed");
  ver->add_flag("--json", opt.json, "machine-readable output");
  ver->add_option("--inject-fault", opt.inject_fault, "corrupt one check (negative control)");

  auto* val = app.add_subcommand("validate-geometry", "check pole conditions of a geometry");
  val->add_option("--geometry", opt.geometry, "spec file or catalog:name(dims)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (lap->parsed()) return cmd_laplacian(opt);
    if (cls->parsed()) return cmd_classify(opt);
    if (alm->parsed()) return cmd_almansi(opt);
    if (ver->parsed()) return cmd_verify(opt);
    if (val->parsed()) return cmd_validate(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
