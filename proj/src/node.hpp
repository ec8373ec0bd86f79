#pragma once

#include "polyharm/expr.hpp"

#include <memory>
#include <vector>

namespace polyharm {

struct Node {
  Kind kind = Kind::Constant;
  Rational number;  // Constant value or Power exponent
  std::string name;
  Builtin fn = Builtin::Sin;
  std::vector<Expression> children;
  std::size_t hash = 0;
  std::size_t count = 1;
  bool simplified = false;
};

struct NodeAccess {
  static const Node& node(const Expression& e) { return *e.node_; }
  static Expression wrap(std::shared_ptr<const Node> n) { return Expression(std::move(n)); }
};

/// Computes hash and size, then wraps the node.
Expression build(Node n);

/// Copy of e carrying the simplified flag. Only simplify() stamps nodes.
Expression mark_simplified(const Expression& e);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace polyharm
