// Recursive-descent parser and printers for the expression grammar:
//
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | power
//   power    := atom ('^' exponent)?
//   exponent := integer | '(' integer '/' integer ')' | '-' exponent
//   atom     := number | 'pi' | identifier | identifier '(' expr ')' | '(' expr ')'

#include "polyharm/expr.hpp"

#include "node.hpp"

#include <cctype>
#include <sstream>

namespace polyharm {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_all() {
    Expression e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expression expr() {
    Expression acc = term();
    bool chain = false;
    for (;;) {
      bool plus = peek('+');
      if (!plus && !peek('-')) return acc;
      ++pos_;
      Expression rhs = term();
      if (!plus) rhs = Expression::negate(std::move(rhs));
      if (chain) {
        std::vector<Expression> kids(acc.children().begin(), acc.children().end());
        kids.push_back(std::move(rhs));
        acc = Expression::sum(std::move(kids));
      } else {
        acc = Expression::sum({std::move(acc), std::move(rhs)});
        chain = true;
      }
    }
  }

  Expression term() {
    Expression acc = unary();
    bool chain = false;
    for (;;) {
      bool times = peek('*');
      if (!times && !peek('/')) return acc;
      ++pos_;
      Expression rhs = unary();
      if (!times) {
        acc = Expression::quotient(std::move(acc), std::move(rhs));
        chain = false;
      } else if (chain) {
        std::vector<Expression> kids(acc.children().begin(), acc.children().end());
        kids.push_back(std::move(rhs));
        acc = Expression::product(std::move(kids));
      } else {
        acc = Expression::product({std::move(acc), std::move(rhs)});
        chain = true;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return Expression::negate(unary());
    return power();
  }

  Expression power() {
    Expression base = atom();
    if (accept('^')) return Expression::power(std::move(base), exponent());
    return base;
  }

  Rational integer_literal() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || ident_char(text_[pos_]))) {
      pos_ = start;
      fail("malformed number in exponent");
    }
    return Rational(std::string(text_.substr(start, pos_ - start)), 10);
  }

  Rational exponent() {
    if (accept('-')) return -exponent();
    if (accept('(')) {
      bool negative = accept('-');
      Rational num = integer_literal();
      Rational value = num;
      if (accept('/')) {
        std::size_t at = pos_;
        Rational den = integer_literal();
        if (den == 0) {
          pos_ = at;
          fail("zero denominator in exponent");
        }
        value = num / den;
      }
      expect(')');
      value.canonicalize();
      return negative ? Rational(-value) : value;
    }
    return integer_literal();
  }

  Expression number() {
    std::size_t start = pos_;
    std::string mantissa;
    long scale = 0;
    while (pos_ < text_.size() && digit(text_[pos_])) mantissa += text_[pos_++];
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac_start = pos_;
      while (pos_ < text_.size() && digit(text_[pos_])) {
        mantissa += text_[pos_++];
        --scale;
      }
      if (frac_start == pos_) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (mantissa.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        neg = text_[pos_] == '-';
        ++pos_;
      }
      std::size_t exp_start = pos_;
      while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
      if (exp_start == pos_ || pos_ - exp_start > 6) {
        pos_ = start;
        fail("malformed number");
      }
      long e = std::stol(std::string(text_.substr(exp_start, pos_ - exp_start)));
      scale += neg ? -e : e;
      (void)save;
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || ident_char(text_[pos_]))) {
      pos_ = start;
      fail("malformed number");
    }
    mpz_class num(mantissa, 10);
    mpz_class ten = 10;
    mpz_class factor;
    mpz_pow_ui(factor.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational value = scale < 0 ? Rational(num, factor) : Rational(num * factor);
    value.canonicalize();
    return Expression::constant(value);
  }

  Expression atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      expect(')');
      return inner;
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (peek('(')) {
        auto fn = builtin_from_name(name);
        if (!fn) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        Expression arg = expr();
        expect(')');
        return Expression::call(*fn, std::move(arg));
      }
      if (name == "pi") return Expression::pi();
      return Expression::variable(std::move(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string rational_text(const Rational& q) {
  // Terminating decimals print exactly; anything else prints as (p/q).
  mpz_class den = q.get_den();
  int twos = 0;
  int fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  mpz_class num = q.get_num();
  bool negative = num < 0;
  if (negative) num = -num;
  std::string out;
  if (q.get_den() == 1) {
    out = num.get_str();
  } else if (den == 1) {
    int digits = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class scaled = num * scale / q.get_den();
    std::string s = scaled.get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    out = s;
  } else {
    out = "(" + num.get_str() + "/" + q.get_den().get_str() + ")";
  }
  return negative ? "-" + out : out;
}

std::string exponent_text(const Rational& q) {
  if (q < 0) return "-" + exponent_text(-q);
  if (is_integer(q)) return q.get_num().get_str();
  return "(" + q.get_num().get_str() + "/" + q.get_den().get_str() + ")";
}

bool negative_constant(const Expression& e) { return e.kind() == Kind::Constant && e.value() < 0; }

void emit(const Expression& e, std::ostringstream& os);

void emit_wrapped(const Expression& e, bool wrap, std::ostringstream& os) {
  if (wrap) os << '(';
  emit(e, os);
  if (wrap) os << ')';
}

bool is_additive(const Expression& e) { return e.kind() == Kind::Sum; }
bool is_multiplicative(const Expression& e) {
  return e.kind() == Kind::Product || e.kind() == Kind::Quotient;
}
bool is_signed(const Expression& e) { return e.kind() == Kind::Negate || negative_constant(e); }

void emit(const Expression& e, std::ostringstream& os) {
  switch (e.kind()) {
    case Kind::Constant:
      os << rational_text(e.value());
      return;
    case Kind::Pi:
      os << "pi";
      return;
    case Kind::Variable:
      os << e.name();
      return;
    case Kind::Negate: {
      const Expression& u = e.child(0);
      os << '-';
      emit_wrapped(u, is_additive(u) || is_multiplicative(u) || negative_constant(u), os);
      return;
    }
    case Kind::Sum: {
      auto kids = e.children();
      if (kids.empty()) {
        os << "(0+0)";
        return;
      }
      emit_wrapped(kids[0], is_additive(kids[0]) || kids.size() == 1, os);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        const Expression& k = kids[i];
        if (k.kind() == Kind::Negate) {
          os << " - ";
          emit_wrapped(k.child(0), is_additive(k.child(0)) || negative_constant(k.child(0)), os);
        } else {
          os << " + ";
          emit_wrapped(k, is_additive(k) || is_signed(k), os);
        }
      }
      return;
    }
    case Kind::Product: {
      auto kids = e.children();
      if (kids.empty()) {
        os << "(1*1)";
        return;
      }
      const Expression& first = kids[0];
      emit_wrapped(first,
                   is_additive(first) || first.kind() == Kind::Product || negative_constant(first) ||
                       kids.size() == 1,
                   os);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        os << '*';
        emit_wrapped(kids[i], is_additive(kids[i]) || is_multiplicative(kids[i]) || is_signed(kids[i]),
                     os);
      }
      return;
    }
    case Kind::Quotient: {
      const Expression& num = e.child(0);
      const Expression& den = e.child(1);
      emit_wrapped(num, is_additive(num) || negative_constant(num), os);
      os << '/';
      emit_wrapped(den, is_additive(den) || is_multiplicative(den) || is_signed(den), os);
      return;
    }
    case Kind::Power: {
      const Expression& base = e.child(0);
      bool atomic = base.kind() == Kind::Variable || base.kind() == Kind::Pi ||
                    base.kind() == Kind::Call ||
                    (base.kind() == Kind::Constant && base.value() >= 0 && is_integer(base.value()));
      emit_wrapped(base, !atomic, os);
      os << '^' << exponent_text(e.exponent());
      return;
    }
    case Kind::Call:
      os << builtin_name(e.builtin()) << '(';
      emit(e.child(0), os);
      os << ')';
      return;
  }
}

// Rebuilds a (typically simplified) tree with subtraction and division so it
// reads naturally. Value-preserving.
Expression display_form(const Expression& e);

struct SplitProduct {
  Rational coefficient = 1;
  std::vector<Expression> numerator;
  std::vector<Expression> denominator;
};

SplitProduct split_product(const Expression& e) {
  SplitProduct out;
  auto absorb = [&](const Expression& f) {
    if (f.kind() == Kind::Constant) {
      out.coefficient *= f.value();
    } else if (f.kind() == Kind::Power && f.exponent() < 0) {
      Rational positive = -f.exponent();
      Expression base = display_form(f.child(0));
      out.denominator.push_back(positive == 1 ? base : Expression::power(base, positive));
    } else {
      out.numerator.push_back(display_form(f));
    }
  };
  if (e.kind() == Kind::Product) {
    for (const auto& f : e.children()) absorb(f);
  } else {
    absorb(e);
  }
  return out;
}

Expression join_product(std::vector<Expression> factors) {
  if (factors.empty()) return Expression::integer(1);
  if (factors.size() == 1) return factors[0];
  return Expression::product(std::move(factors));
}

// Returns the display form of |term| and whether the term is negative.
std::pair<Expression, bool> display_term(const Expression& e) {
  if (e.kind() != Kind::Product && e.kind() != Kind::Constant &&
      !(e.kind() == Kind::Power && e.exponent() < 0)) {
    return {display_form(e), false};
  }
  SplitProduct sp = split_product(e);
  bool negative = sp.coefficient < 0;
  Rational c = negative ? Rational(-sp.coefficient) : sp.coefficient;
  std::vector<Expression> num;
  if (c.get_num() != 1 || sp.numerator.empty()) num.push_back(Expression::constant(Rational(c.get_num())));
  for (auto& f : sp.numerator) num.push_back(f);
  std::vector<Expression> den = sp.denominator;
  if (c.get_den() != 1) den.insert(den.begin(), Expression::constant(Rational(c.get_den())));
  Expression top = join_product(std::move(num));
  if (den.empty()) return {top, negative};
  return {Expression::quotient(top, join_product(std::move(den))), negative};
}

Expression display_form(const Expression& e) {
  switch (e.kind()) {
    case Kind::Sum: {
      std::vector<Expression> terms;
      for (const auto& t : e.children()) {
        auto [body, negative] = display_term(t);
        terms.push_back(negative ? Expression::negate(body) : body);
      }
      // Lead with a positive term when one exists.
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].kind() != Kind::Negate) {
          std::rotate(terms.begin(), terms.begin() + static_cast<long>(i), terms.begin() + static_cast<long>(i) + 1);
          break;
        }
      }
      return Expression::sum(std::move(terms));
    }
    case Kind::Product:
    case Kind::Power:
    case Kind::Constant: {
      if (e.kind() == Kind::Power && e.exponent() >= 0)
        return Expression::power(display_form(e.child(0)), e.exponent());
      auto [body, negative] = display_term(e);
      return negative ? Expression::negate(body) : body;
    }
    case Kind::Negate:
      return Expression::negate(display_form(e.child(0)));
    case Kind::Quotient:
      return Expression::quotient(display_form(e.child(0)), display_form(e.child(1)));
    case Kind::Call:
      return Expression::call(e.builtin(), display_form(e.child(0)));
    default:
      return e;
  }
}

}  // namespace

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Expression& e) {
  std::ostringstream os;
  emit(e, os);
  return os.str();
}

std::string format(const Expression& e) { return print(display_form(e)); }

}  // namespace polyharm
