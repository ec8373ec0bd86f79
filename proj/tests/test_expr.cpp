#include "doctest.h"
#include "support.hpp"

#include <numbers>

using namespace testing;

namespace {

// Structural checks on a simplified tree.
bool canonical_shape(const Expression& e) {
  auto kids = e.children();
  switch (e.kind()) {
    case Kind::Sum:
    case Kind::Product: {
      if (kids.size() < 2) return false;
      bool all_constant = true;
      for (const auto& c : kids) {
        if (c.kind() == e.kind()) return false;
        if (c.is_constant(0)) return false;
        if (e.kind() == Kind::Product && c.is_constant(1)) return false;
        all_constant = all_constant && c.kind() == Kind::Constant;
      }
      if (all_constant) return false;
      break;
    }
    case Kind::Power:
      if (e.exponent() == 1 || e.exponent() == 0) return false;
      if (e.child(0).kind() == Kind::Constant) return false;
      break;
    case Kind::Negate:
      if (e.child(0).kind() == Kind::Constant) return false;
      break;
    default:
      break;
  }
  for (const auto& c : kids) {
    if (!canonical_shape(c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  Expression e = parse("sin(2*r)");
  REQUIRE(e.kind() == Kind::Call);
  CHECK(e.builtin() == Builtin::Sin);
  CHECK(e.child(0) == Expression::product({Expression::integer(2), var("r")}));

  Expression bar = parse("(4*r - sin(4*r)) / sin(2*r)^2");
  REQUIRE(bar.kind() == Kind::Quotient);
  CHECK(bar.child(0).kind() == Kind::Sum);
  CHECK(bar.child(1) == pow(sin(Expression::product({Expression::integer(2), var("r")})), 2));

  Expression q = parse("x/(x^2 - y^2)");
  REQUIRE(q.kind() == Kind::Quotient);
  CHECK(q.child(0) == var("x"));
  CHECK(q.child(1) == Expression::sum({pow(var("x"), 2), Expression::negate(pow(var("y"), 2))}));
}

TEST_CASE("parse precedence and associativity") {
  CHECK(parse("-x^2") == Expression::negate(pow(var("x"), 2)));
  CHECK(parse("a - b - c") ==
        Expression::sum({var("a"), Expression::negate(var("b")), Expression::negate(var("c"))}));
  CHECK(parse("a/b/c") == Expression::quotient(Expression::quotient(var("a"), var("b")), var("c")));
  CHECK(parse("2*x*y") == Expression::product({Expression::integer(2), var("x"), var("y")}));
  CHECK(parse("x^(-1/2)") == Expression::power(var("x"), Rational(-1, 2)));
  CHECK(parse("0.25").value() == Rational(1, 4));
  CHECK(parse("pi").kind() == Kind::Pi);
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse("2*+");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 2);
  }
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse("x^y"), ParseError);
  CHECK_THROWS_AS(parse("(x"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("differentiate examples") {
  Expression r = var("r");
  CHECK(differentiate(pow(r, 2), "r") == Expression::product({Expression::integer(2), r}));

  Expression d = differentiate(parse("cot(2*r)"), "r");
  for (double x : {0.3, 0.7, 1.1}) {
    double expected = -2 / std::pow(std::sin(2 * x), 2);
    CHECK(evaluate(d, {{"r", x}}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(evaluate(d, {{"r", x}}) == doctest::Approx(central_difference(parse("cot(2*r)"), "r", {{"r", x}}, 1e-5))
                                         .epsilon(1e-8));
  }

  Expression dq = differentiate(parse("x/(x^2+y^2)"), "x");
  ZeroVerdict v = is_zero(simplify(dq - parse("(y^2 - x^2)/(x^2 + y^2)^2")), ZeroTestConfig{});
  CHECK(v.kind == VerdictKind::ProvenZero);
  CHECK(differentiate(parse("sin(y)"), "x") == Expression::integer(0));
}

TEST_CASE("simplify examples") {
  CHECK(simplify(parse("0*sin(r) + r")) == var("r"));
  CHECK(simplify(parse("x^2/x")) == var("x"));
  Expression lap = simplify(parse("2*cot(r) - 2*tan(r)"));
  ZeroVerdict v = is_zero(simplify(lap - parse("4*cot(2*r)")), ZeroTestConfig{});
  CHECK(v.kind == VerdictKind::NumericallyZero);
  CHECK(simplify(parse("(x^2)^3")) == pow(var("x"), 6));
  CHECK(simplify(parse("2 + 3*4 - 1/2")) == Expression::constant(Rational(27, 2)));
  CHECK(simplify(parse("x + x + 2*x")) == Expression::product({Expression::integer(4), var("x")}));
  CHECK(simplify(parse("sin(0) + cos(0) + exp(0) + ln(1)")) == Expression::integer(2));
  CHECK(simplify(parse("(x*y)^2")) == simplify(parse("x^2*y^2")));
}

TEST_CASE("simplified trees satisfy the canonical shape") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Expression s = simplify(random_expression(rng, 4, {"x", "y"}));
    CHECK_MESSAGE(canonical_shape(s), print(s));
    CHECK(s.is_simplified());
    CHECK(simplify(s) == s);
  }
}

TEST_CASE("evaluate examples and errors") {
  CHECK(evaluate(parse("r^2"), {{"r", 3}}) == 9);
  CHECK(evaluate(parse("(4*r - sin(4*r))/sin(2*r)^2"), {{"r", std::numbers::pi / 4}}) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(evaluate(parse("cot(r)"), {{"r", 0}}), DomainError);
  CHECK_THROWS_AS(evaluate(parse("ln(r)"), {{"r", -1}}), DomainError);
  CHECK_THROWS_AS(evaluate(parse("1/(r-1)"), {{"r", 1}}), DomainError);
  CHECK_THROWS_AS(evaluate(parse("tan(r)"), {{"r", std::numbers::pi / 2}}), DomainError);
  CHECK_THROWS_AS(evaluate(parse("r^(1/2)"), {{"r", -4}}), DomainError);
  CHECK_THROWS_AS(evaluate(parse("x + y"), {{"x", 1}}), UnboundVariable);
  CHECK(evaluate(parse("r^(1/2)"), {{"r", 4}}) == doctest::Approx(2));
  CHECK(evaluate(parse("coth(1)"), {}) == doctest::Approx(1 / std::tanh(1.0)));
}

TEST_CASE("substitute examples") {
  Expression r = var("r");
  CHECK(substitute(pow(r, 2), "r", Expression::integer(2) * r) == pow(Expression::integer(2) * r, 2));
  Expression e = parse("sin(x) + 1");
  CHECK(substitute(e, "q", var("z")) == e);
  CHECK(substitute(parse("sin(r)/r"), "r", parse("x+y")) == parse("sin(x+y)/(x+y)"));
}

TEST_CASE("print and format round-trip") {
  std::vector<std::string> corpus{
      "sin(2*r)",        "(4*r - sin(4*r))/sin(2*r)^2", "x/(x^2 - y^2)",   "-x^2",
      "a - b - c",       "a/b/c",                        "2^3",             "x^(-1/2)",
      "(-x)^2",          "-(-x)",                        "exp(ln(x))",      "0.125*x",
      "coth(r)^3*csc(r)", "pi/4 + r",                    "-(x1^2 + y1^2)",  "1/(2*x)",
      "x*(y + z)*w",     "(a + b)/(c - d)",              "sec(x)^(2/3)",    "-3/4",
      "x1*y1*(x1^2 - y1^2)", "64*cot(2*r)*csc(2*r)^4*(sin(4*r) - 4*r)"};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) corpus.push_back(print(random_expression(rng, 5, {"x", "y", "r"})));
  for (const auto& text : corpus) {
    Expression e = parse(text);
    CHECK_MESSAGE(parse(print(e)) == e, text);
    Expression s = simplify(e);
    // format rewrites the tree but must keep its value
    Expression shown = parse(format(s));
    for (double x : {0.37, 1.21}) {
      Assignment at{{"x", x}, {"y", 0.5 * x + 0.11}, {"z", 0.9}, {"r", x}, {"a", 1.3}, {"b", 0.4},
                    {"c", 2.2}, {"d", 0.3}, {"w", 1.7}, {"x1", x}, {"y1", 0.6}};
      auto a = try_evaluate(s, at);
      auto b = try_evaluate(shown, at);
      auto c = try_evaluate(parse(print(s)), at);
      if (a && b) CHECK_MESSAGE(close(*a, *b, 1e-10), text);
      if (a && c) CHECK_MESSAGE(close(*a, *c, 1e-10), text);
    }
  }
}

TEST_CASE("free variables and rational-function detection") {
  auto vars = free_variables(parse("x*sin(y) + pi"));
  CHECK(vars.size() == 2);
  CHECK(vars.count("x") == 1);
  CHECK(is_rational_function(parse("x/(x^2+y^2) + 3")));
  CHECK_FALSE(is_rational_function(parse("x^(1/2)")));
  CHECK_FALSE(is_rational_function(parse("sin(x)")));
}
