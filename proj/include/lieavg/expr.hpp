#pragma once

// Small arithmetic expression language used by configuration files to
// declare forcing profiles, potentials, connection entries and functional
// densities.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: sin, cos, exp, abs. Constants: pi, e. Angles are radians.

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lieavg::expr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int column);
  /// 1-based column of the offending character (source length + 1 at end of input).
  int column() const { return column_; }

 private:
  int column_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Number, Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Sin, Cos, Exp, Abs };

struct Node {
  NodeKind kind;
  double value = 0.0;      // Number, Constant
  int slot = -1;           // Variable: index into free_variables()
  Function func = Function::Sin;
  int lhs = -1;            // child node indices
  int rhs = -1;
};

using Env = std::map<std::string, double, std::less<>>;

class BoundExpression;

/// Immutable parsed expression. Copies share the underlying tree.
class Expression {
 public:
  static Expression parse(std::string_view source);
  static Expression constant(double value);

  double evaluate(const Env& env) const;

  /// Variable names in order of first appearance.
  const std::vector<std::string>& free_variables() const;

  /// Fully parenthesised rendering; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  const std::string& source() const;

  /// Resolve variables against a fixed name list for repeated evaluation.
  /// Throws EvalError if a free variable is not in `names`.
  BoundExpression bind(std::span<const std::string> names) const;

  bool structurally_equal(const Expression& other) const;

  // Tree access (used by tests and the printer).
  const std::vector<Node>& nodes() const;
  int root() const;

  struct Impl;  // opaque

 private:
  explicit Expression(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  friend class BoundExpression;
  friend class Builder;
};

/// An expression with variables mapped to positions of a value span.
class BoundExpression {
 public:
  BoundExpression() = default;
  double operator()(std::span<const double> values) const;
  const Expression& expression() const { return expr_; }

 private:
  friend class Expression;
  BoundExpression(Expression e, std::vector<int> slot_to_index)
      : expr_(std::move(e)), slot_to_index_(std::move(slot_to_index)) {}
  Expression expr_ = Expression::constant(0.0);
  std::vector<int> slot_to_index_;
};

/// Programmatic construction, used by property tests to generate random trees.
class Builder {
 public:
  int number(double v);
  int constant(std::string_view name);
  int variable(std::string_view name);
  int negate(int child);
  int binary(NodeKind op, int lhs, int rhs);
  int call(Function f, int arg);
  Expression finish(int root) &&;

 private:
  std::vector<Node> nodes_;
  std::vector<std::string> vars_;
};

std::string_view function_name(Function f);

}  // namespace lieavg::expr
