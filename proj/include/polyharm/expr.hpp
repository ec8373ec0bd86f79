#pragma once

// Symbolic expression kernel: immutable trees over real variables with exact
// rational constants and exponents.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyharm {

using Rational = mpq_class;

enum class Kind {
  Constant,
  Pi,
  Variable,
  Negate,
  Sum,
  Product,
  Quotient,
  Power,
  Call,
};

enum class Builtin {
  Sin,
  Cos,
  Tan,
  Cot,
  Sec,
  Csc,
  Sinh,
  Cosh,
  Tanh,
  Coth,
  Exp,
  Ln,
};

std::string_view builtin_name(Builtin b);
std::optional<Builtin> builtin_from_name(std::string_view name);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;
struct NodeAccess;

/// Immutable expression tree. Copies share structure.
class Expression {
 public:
  /// The constant 0.
  Expression();

  static Expression constant(const Rational& value);
  static Expression integer(long value);
  static Expression pi();
  static Expression variable(std::string name);
  static Expression negate(Expression operand);
  static Expression sum(std::vector<Expression> terms);
  static Expression product(std::vector<Expression> factors);
  static Expression quotient(Expression numerator, Expression denominator);
  static Expression power(Expression base, const Rational& exponent);
  static Expression call(Builtin fn, Expression argument);

  Kind kind() const;
  /// Value of a Constant node.
  const Rational& value() const;
  /// Exponent of a Power node.
  const Rational& exponent() const;
  /// Name of a Variable node.
  const std::string& name() const;
  Builtin builtin() const;
  std::span<const Expression> children() const;
  const Expression& child(std::size_t i) const { return children()[i]; }

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(long v) const;
  bool is_simplified() const;

  std::size_t hash() const;
  std::size_t node_count() const;

  friend bool operator==(const Expression& a, const Expression& b);
  friend std::strong_ordering operator<=>(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend struct NodeAccess;

  std::shared_ptr<const Node> node_;
};

// Raw tree builders; no simplification happens here.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression pow(const Expression& base, const Rational& exponent);
Expression sin(const Expression& e);
Expression cos(const Expression& e);
Expression tan(const Expression& e);
Expression cot(const Expression& e);
Expression sec(const Expression& e);
Expression csc(const Expression& e);
Expression sinh(const Expression& e);
Expression cosh(const Expression& e);
Expression tanh(const Expression& e);
Expression coth(const Expression& e);
Expression exp(const Expression& e);
Expression ln(const Expression& e);

using Assignment = std::map<std::string, double, std::less<>>;

Expression parse(std::string_view text);

/// Grammar-faithful printing: parse(print(e)) rebuilds e for any tree the
/// parser can produce.
std::string print(const Expression& e);

/// Human-oriented rendering: negative coefficients become subtraction and
/// negative powers become division. The output is valid input text.
std::string format(const Expression& e);

Expression differentiate(const Expression& e, std::string_view variable);
Expression simplify(const Expression& e);
double evaluate(const Expression& e, const Assignment& assignment);
Expression substitute(const Expression& e, std::string_view variable,
                      const Expression& replacement);

std::set<std::string, std::less<>> free_variables(const Expression& e);
bool depends_on(const Expression& e, std::string_view variable);

/// True when e is built only from rational constants, pi, variables, +, -,
/// *, / and integer powers.
bool is_rational_function(const Expression& e);

std::ostream& operator<<(std::ostream& os, const Expression& e);

}  // namespace polyharm
