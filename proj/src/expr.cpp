#include "lieavg/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "lieavg/numfmt.hpp"

namespace lieavg::expr {

ParseError::ParseError(const std::string& what, int column)
    : std::runtime_error("column " + std::to_string(column) + ": " + what), column_(column) {}

struct Expression::Impl {
  std::vector<Node> nodes;
  int root = -1;
  std::vector<std::string> vars;
  std::string source;
};

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression::Impl run() {
    skip_space();
    if (pos_ == src_.size()) fail("empty expression");
    const int r = parse_expr();
    skip_space();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    Expression::Impl impl;
    impl.nodes = std::move(nodes_);
    impl.root = r;
    impl.vars = std::move(vars_);
    impl.source = std::string(src_);
    return impl;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, static_cast<int>(pos_) + 1);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = push({NodeKind::Add, 0, -1, Function::Sin, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = push({NodeKind::Sub, 0, -1, Function::Sin, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push({NodeKind::Mul, 0, -1, Function::Sin, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = push({NodeKind::Div, 0, -1, Function::Sin, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) {
      const int child = parse_unary();
      return push({NodeKind::Negate, 0, -1, Function::Sin, child, -1});
    }
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) {
      const int exponent = parse_unary();
      return push({NodeKind::Pow, 0, -1, Function::Sin, base, exponent});
    }
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ == src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (is_name_start(c)) return parse_name();
    fail(std::string("unexpected '") + c + "'");
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    // Exponent only when followed by digits, so "2e" is not swallowed.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return push({NodeKind::Number, v});
  }

  int parse_name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      Function f;
      if (name == "sin") {
        f = Function::Sin;
      } else if (name == "cos") {
        f = Function::Cos;
      } else if (name == "exp") {
        f = Function::Exp;
      } else if (name == "abs") {
        f = Function::Abs;
      } else {
        pos_ = start;
        fail("unknown function '" + std::string(name) + "'");
      }
      ++pos_;
      const int arg = parse_expr();
      if (!accept(')')) fail("expected ')'");
      Node node{NodeKind::Call};
      node.func = f;
      node.lhs = arg;
      return push(node);
    }
    if (name == "pi") return push({NodeKind::Constant, std::numbers::pi});
    if (name == "e") return push({NodeKind::Constant, std::numbers::e});
    auto it = std::find(vars_.begin(), vars_.end(), name);
    int slot = static_cast<int>(it - vars_.begin());
    if (it == vars_.end()) vars_.emplace_back(name);
    Node node{NodeKind::Variable};
    node.slot = slot;
    return push(node);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::string> vars_;
};

double apply(Function f, double x) {
  switch (f) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Exp: return std::exp(x);
    case Function::Abs: return std::abs(x);
  }
  return 0.0;
}

template <class Lookup>
double eval_node(const std::vector<Node>& nodes, int i, const Lookup& lookup) {
  const Node& n = nodes[static_cast<std::size_t>(i)];
  switch (n.kind) {
    case NodeKind::Number:
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return lookup(n.slot);
    case NodeKind::Negate: return -eval_node(nodes, n.lhs, lookup);
    case NodeKind::Add: return eval_node(nodes, n.lhs, lookup) + eval_node(nodes, n.rhs, lookup);
    case NodeKind::Sub: return eval_node(nodes, n.lhs, lookup) - eval_node(nodes, n.rhs, lookup);
    case NodeKind::Mul: return eval_node(nodes, n.lhs, lookup) * eval_node(nodes, n.rhs, lookup);
    case NodeKind::Div: {
      const double num = eval_node(nodes, n.lhs, lookup);
      const double den = eval_node(nodes, n.rhs, lookup);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case NodeKind::Pow: {
      const double base = eval_node(nodes, n.lhs, lookup);
      const double ex = eval_node(nodes, n.rhs, lookup);
      if (base == 0.0 && ex < 0.0) throw EvalError("zero raised to a negative power");
      return std::pow(base, ex);
    }
    case NodeKind::Call: return apply(n.func, eval_node(nodes, n.lhs, lookup));
  }
  return 0.0;
}

char op_char(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return '+';
    case NodeKind::Sub: return '-';
    case NodeKind::Mul: return '*';
    case NodeKind::Div: return '/';
    case NodeKind::Pow: return '^';
    default: return '?';
  }
}

void print_node(const Expression::Impl& impl, int i, std::string& out);

}  // namespace

std::string_view function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Abs: return "abs";
  }
  return "?";
}

namespace {

void print_node(const Expression::Impl& impl, int i, std::string& out) {
  const Node& n = impl.nodes[static_cast<std::size_t>(i)];
  switch (n.kind) {
    case NodeKind::Number: out += format_double(n.value); break;
    case NodeKind::Constant: out += (n.value == std::numbers::pi ? "pi" : "e"); break;
    case NodeKind::Variable: out += impl.vars[static_cast<std::size_t>(n.slot)]; break;
    case NodeKind::Negate:
      out += "(-";
      print_node(impl, n.lhs, out);
      out += ')';
      break;
    case NodeKind::Call:
      out += function_name(n.func);
      out += '(';
      print_node(impl, n.lhs, out);
      out += ')';
      break;
    default:
      out += '(';
      print_node(impl, n.lhs, out);
      out += ' ';
      out += op_char(n.kind);
      out += ' ';
      print_node(impl, n.rhs, out);
      out += ')';
  }
}

bool same_tree(const Expression::Impl& a, int ia, const Expression::Impl& b, int ib) {
  const Node& x = a.nodes[static_cast<std::size_t>(ia)];
  const Node& y = b.nodes[static_cast<std::size_t>(ib)];
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::Number:
    case NodeKind::Constant: return x.value == y.value;
    case NodeKind::Variable:
      return a.vars[static_cast<std::size_t>(x.slot)] == b.vars[static_cast<std::size_t>(y.slot)];
    case NodeKind::Negate: return same_tree(a, x.lhs, b, y.lhs);
    case NodeKind::Call: return x.func == y.func && same_tree(a, x.lhs, b, y.lhs);
    default: return same_tree(a, x.lhs, b, y.lhs) && same_tree(a, x.rhs, b, y.rhs);
  }
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  return Expression(std::make_shared<const Impl>(Parser(source).run()));
}

Expression Expression::constant(double value) {
  Impl impl;
  impl.nodes.push_back({NodeKind::Number, value});
  impl.root = 0;
  impl.source = format_double(value);
  return Expression(std::make_shared<const Impl>(std::move(impl)));
}

double Expression::evaluate(const Env& env) const {
  std::vector<double> values(impl_->vars.size());
  for (std::size_t s = 0; s < impl_->vars.size(); ++s) {
    auto it = env.find(impl_->vars[s]);
    if (it == env.end()) throw EvalError("unbound variable '" + impl_->vars[s] + "'");
    values[s] = it->second;
  }
  return eval_node(impl_->nodes, impl_->root,
                   [&](int slot) { return values[static_cast<std::size_t>(slot)]; });
}

const std::vector<std::string>& Expression::free_variables() const { return impl_->vars; }

std::string Expression::to_string() const {
  std::string out;
  print_node(*impl_, impl_->root, out);
  return out;
}

const std::string& Expression::source() const { return impl_->source; }

BoundExpression Expression::bind(std::span<const std::string> names) const {
  std::vector<int> map(impl_->vars.size());
  for (std::size_t s = 0; s < impl_->vars.size(); ++s) {
    auto it = std::find(names.begin(), names.end(), impl_->vars[s]);
    if (it == names.end()) {
      throw EvalError("unbound variable '" + impl_->vars[s] + "' in \"" + impl_->source + "\"");
    }
    map[s] = static_cast<int>(it - names.begin());
  }
  return BoundExpression(*this, std::move(map));
}

bool Expression::structurally_equal(const Expression& other) const {
  return same_tree(*impl_, impl_->root, *other.impl_, other.impl_->root);
}

const std::vector<Node>& Expression::nodes() const { return impl_->nodes; }
int Expression::root() const { return impl_->root; }

double BoundExpression::operator()(std::span<const double> values) const {
  const auto& impl = *expr_.impl_;
  return eval_node(impl.nodes, impl.root, [&](int slot) {
    return values[static_cast<std::size_t>(slot_to_index_[static_cast<std::size_t>(slot)])];
  });
}

int Builder::number(double v) {
  nodes_.push_back({NodeKind::Number, v});
  return static_cast<int>(nodes_.size()) - 1;
}

int Builder::constant(std::string_view name) {
  if (name != "pi" && name != "e") throw std::invalid_argument("unknown constant");
  nodes_.push_back({NodeKind::Constant, name == "pi" ? std::numbers::pi : std::numbers::e});
  return static_cast<int>(nodes_.size()) - 1;
}

int Builder::variable(std::string_view name) {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  const int slot = static_cast<int>(it - vars_.begin());
  if (it == vars_.end()) vars_.emplace_back(name);
  Node n{NodeKind::Variable};
  n.slot = slot;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int Builder::negate(int child) {
  nodes_.push_back({NodeKind::Negate, 0, -1, Function::Sin, child, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

int Builder::binary(NodeKind op, int lhs, int rhs) {
  nodes_.push_back({op, 0, -1, Function::Sin, lhs, rhs});
  return static_cast<int>(nodes_.size()) - 1;
}

int Builder::call(Function f, int arg) {
  Node n{NodeKind::Call};
  n.func = f;
  n.lhs = arg;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

Expression Builder::finish(int root) && {
  Expression::Impl impl;
  impl.nodes = std::move(nodes_);
  impl.root = root;
  impl.vars = std::move(vars_);
  auto ptr = std::make_shared<Expression::Impl>(std::move(impl));
  Expression e(ptr);
  ptr->source = e.to_string();
  return e;
}

}  // namespace lieavg::expr
