#include "polyharm/expr.hpp"

#include "node.hpp"

#include <array>
#include <functional>
#include <ostream>
#include <utility>

namespace polyharm {

namespace {

constexpr std::array<std::pair<Builtin, std::string_view>, 12> kBuiltinNames = {{
    {Builtin::Sin, "sin"},
    {Builtin::Cos, "cos"},
    {Builtin::Tan, "tan"},
    {Builtin::Cot, "cot"},
    {Builtin::Sec, "sec"},
    {Builtin::Csc, "csc"},
    {Builtin::Sinh, "sinh"},
    {Builtin::Cosh, "cosh"},
    {Builtin::Tanh, "tanh"},
    {Builtin::Coth, "coth"},
    {Builtin::Exp, "exp"},
    {Builtin::Ln, "ln"},
}};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(mpz_get_si(q.get_num_mpz_t())));
  h = mix(h, static_cast<std::size_t>(mpz_get_si(q.get_den_mpz_t())));
  return mix(h, mpz_size(q.get_num_mpz_t()));
}

const Node& N(const Expression& e) { return NodeAccess::node(e); }

std::strong_ordering compare_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::string_view builtin_name(Builtin b) {
  for (const auto& [fn, name] : kBuiltinNames) {
    if (fn == b) return name;
  }
  return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (const auto& [fn, n] : kBuiltinNames) {
    if (n == name) return fn;
  }
  return std::nullopt;
}

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

UnboundVariable::UnboundVariable(const std::string& name)
    : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}

Expression build(Node n) {
  std::size_t h = mix(0, static_cast<std::size_t>(n.kind));
  std::size_t count = 1;
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Power:
      h = mix(h, hash_rational(n.number));
      break;
    case Kind::Variable:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case Kind::Call:
      h = mix(h, static_cast<std::size_t>(n.fn));
      break;
    default:
      break;
  }
  for (const auto& c : n.children) {
    h = mix(h, c.hash());
    count += c.node_count();
  }
  n.hash = h;
  n.count = count;
  return NodeAccess::wrap(std::make_shared<const Node>(std::move(n)));
}

Expression mark_simplified(const Expression& e) {
  if (e.is_simplified()) return e;
  Node copy = N(e);
  copy.simplified = true;
  return NodeAccess::wrap(std::make_shared<const Node>(std::move(copy)));
}

Expression::Expression() : Expression(integer(0)) {}

Expression Expression::constant(const Rational& value) {
  Node n;
  n.kind = Kind::Constant;
  n.number = value;
  n.number.canonicalize();
  n.simplified = true;
  return build(std::move(n));
}

Expression Expression::integer(long value) { return constant(Rational(value)); }

Expression Expression::pi() {
  Node n;
  n.kind = Kind::Pi;
  n.simplified = true;
  return build(std::move(n));
}

Expression Expression::variable(std::string name) {
  Node n;
  n.kind = Kind::Variable;
  n.name = std::move(name);
  n.simplified = true;
  return build(std::move(n));
}

Expression Expression::negate(Expression operand) {
  Node n;
  n.kind = Kind::Negate;
  n.children.push_back(std::move(operand));
  return build(std::move(n));
}

Expression Expression::sum(std::vector<Expression> terms) {
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(terms);
  return build(std::move(n));
}

Expression Expression::product(std::vector<Expression> factors) {
  Node n;
  n.kind = Kind::Product;
  n.children = std::move(factors);
  return build(std::move(n));
}

Expression Expression::quotient(Expression numerator, Expression denominator) {
  Node n;
  n.kind = Kind::Quotient;
  n.children = {std::move(numerator), std::move(denominator)};
  return build(std::move(n));
}

Expression Expression::power(Expression base, const Rational& exponent) {
  Node n;
  n.kind = Kind::Power;
  n.number = exponent;
  n.number.canonicalize();
  n.children.push_back(std::move(base));
  return build(std::move(n));
}

Expression Expression::call(Builtin fn, Expression argument) {
  Node n;
  n.kind = Kind::Call;
  n.fn = fn;
  n.children.push_back(std::move(argument));
  return build(std::move(n));
}

Kind Expression::kind() const { return node_->kind; }
const Rational& Expression::value() const { return node_->number; }
const Rational& Expression::exponent() const { return node_->number; }
const std::string& Expression::name() const { return node_->name; }
Builtin Expression::builtin() const { return node_->fn; }
std::span<const Expression> Expression::children() const { return node_->children; }
bool Expression::is_simplified() const { return node_->simplified; }
std::size_t Expression::hash() const { return node_->hash; }
std::size_t Expression::node_count() const { return node_->count; }

bool Expression::is_constant(long v) const {
  return node_->kind == Kind::Constant && node_->number == v;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.node_count() != b.node_count()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Kind::Constant:
      return compare_rational(a.value(), b.value());
    case Kind::Pi:
      return std::strong_ordering::equal;
    case Kind::Variable:
      return a.name() <=> b.name();
    case Kind::Power:
      if (auto c = a.child(0) <=> b.child(0); c != 0) return c;
      return compare_rational(a.exponent(), b.exponent());
    case Kind::Call:
      if (auto c = a.builtin() <=> b.builtin(); c != 0) return c;
      return a.child(0) <=> b.child(0);
    default:
      break;
  }
  auto ac = a.children();
  auto bc = b.children();
  for (std::size_t i = 0; i < ac.size() && i < bc.size(); ++i) {
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  }
  return ac.size() <=> bc.size();
}

Expression operator+(const Expression& a, const Expression& b) { return Expression::sum({a, b}); }
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::sum({a, Expression::negate(b)});
}
Expression operator-(const Expression& a) { return Expression::negate(a); }
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::product({a, b});
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::quotient(a, b);
}
Expression pow(const Expression& base, const Rational& exponent) {
  return Expression::power(base, exponent);
}
Expression sin(const Expression& e) { return Expression::call(Builtin::Sin, e); }
Expression cos(const Expression& e) { return Expression::call(Builtin::Cos, e); }
Expression tan(const Expression& e) { return Expression::call(Builtin::Tan, e); }
Expression cot(const Expression& e) { return Expression::call(Builtin::Cot, e); }
Expression sec(const Expression& e) { return Expression::call(Builtin::Sec, e); }
Expression csc(const Expression& e) { return Expression::call(Builtin::Csc, e); }
Expression sinh(const Expression& e) { return Expression::call(Builtin::Sinh, e); }
Expression cosh(const Expression& e) { return Expression::call(Builtin::Cosh, e); }
Expression tanh(const Expression& e) { return Expression::call(Builtin::Tanh, e); }
Expression coth(const Expression& e) { return Expression::call(Builtin::Coth, e); }
Expression exp(const Expression& e) { return Expression::call(Builtin::Exp, e); }
Expression ln(const Expression& e) { return Expression::call(Builtin::Ln, e); }

namespace {

void collect_variables(const Expression& e, std::set<std::string, std::less<>>& out) {
  if (e.kind() == Kind::Variable) {
    out.insert(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_variables(c, out);
}

}  // namespace

std::set<std::string, std::less<>> free_variables(const Expression& e) {
  std::set<std::string, std::less<>> out;
  collect_variables(e, out);
  return out;
}

bool depends_on(const Expression& e, std::string_view variable) {
  if (e.kind() == Kind::Variable) return e.name() == variable;
  for (const auto& c : e.children()) {
    if (depends_on(c, variable)) return true;
  }
  return false;
}

bool is_rational_function(const Expression& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Pi:
    case Kind::Variable:
      return true;
    case Kind::Call:
      return false;
    case Kind::Power:
      if (!is_integer(e.exponent())) return false;
      break;
    default:
      break;
  }
  for (const auto& c : e.children()) {
    if (!is_rational_function(c)) return false;
  }
  return true;
}

Expression substitute(const Expression& e, std::string_view variable,
                      const Expression& replacement) {
  if (e.kind() == Kind::Variable) return e.name() == variable ? replacement : e;
  if (e.children().empty() || !depends_on(e, variable)) return e;
  std::vector<Expression> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children()) kids.push_back(substitute(c, variable, replacement));
  switch (e.kind()) {
    case Kind::Negate:
      return Expression::negate(kids[0]);
    case Kind::Sum:
      return Expression::sum(std::move(kids));
    case Kind::Product:
      return Expression::product(std::move(kids));
    case Kind::Quotient:
      return Expression::quotient(kids[0], kids[1]);
    case Kind::Power:
      return Expression::power(kids[0], e.exponent());
    case Kind::Call:
      return Expression::call(e.builtin(), kids[0]);
    default:
      return e;
  }
}

std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << format(e); }

}  // namespace polyharm
