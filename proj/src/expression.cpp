#include "nkcert/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nkcert/error.hpp"

namespace nkcert {

enum class Op { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos };

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::size_t index = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_constant(double v) {
  return std::make_shared<const Expression::Node>(Expression::Node{Op::Constant, v, 0, nullptr, nullptr});
}

NodePtr make_variable(std::size_t i) {
  return std::make_shared<const Expression::Node>(Expression::Node{Op::Variable, 0.0, i, nullptr, nullptr});
}

bool is_const(const NodePtr& n) { return n->op == Op::Constant; }
bool is_value(const NodePtr& n, double v) { return is_const(n) && n->value == v; }

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, 0, std::move(lhs), std::move(rhs)});
}

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Exp: return std::exp(a);
    case Op::Log: return std::log(a);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    default: break;
  }
  throw InvalidArgument("not a unary operator");
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return std::pow(a, b);
    default: break;
  }
  throw InvalidArgument("not a binary operator");
}

// Builders below fold constants and drop neutral elements so that
// derivatives of polynomial systems stay small.

NodePtr unary(Op op, NodePtr a) {
  if (is_const(a)) return make_constant(apply_unary(op, a->value));
  if (op == Op::Neg && a->op == Op::Neg) return a->lhs;
  return make_node(op, std::move(a));
}

NodePtr neg(NodePtr a) { return unary(Op::Neg, std::move(a)); }

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value + b->value);
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return make_node(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value - b->value);
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return neg(std::move(b));
  return make_node(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value * b->value);
  if (is_value(a, 0.0) || is_value(b, 0.0)) return make_constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return neg(std::move(b));
  if (is_value(b, -1.0)) return neg(std::move(a));
  return make_node(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value / b->value);
  if (is_value(a, 0.0)) return make_constant(0.0);
  if (is_value(b, 1.0)) return a;
  return make_node(Op::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(std::pow(a->value, b->value));
  if (is_value(b, 0.0)) return make_constant(1.0);
  if (is_value(b, 1.0)) return a;
  return make_node(Op::Pow, std::move(a), std::move(b));
}

double eval(const Expression::Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return x[n.index];
    case Op::Neg:
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos: return apply_unary(n.op, eval(*n.lhs, x));
    default: return apply_binary(n.op, eval(*n.lhs, x), eval(*n.rhs, x));
  }
}

NodePtr diff(const NodePtr& n, std::size_t var) {
  switch (n->op) {
    case Op::Constant: return make_constant(0.0);
    case Op::Variable: return make_constant(n->index == var ? 1.0 : 0.0);
    case Op::Neg: return neg(diff(n->lhs, var));
    case Op::Add: return add(diff(n->lhs, var), diff(n->rhs, var));
    case Op::Sub: return sub(diff(n->lhs, var), diff(n->rhs, var));
    case Op::Mul: return add(mul(diff(n->lhs, var), n->rhs), mul(n->lhs, diff(n->rhs, var)));
    case Op::Div: {
      auto num = sub(mul(diff(n->lhs, var), n->rhs), mul(n->lhs, diff(n->rhs, var)));
      return div(num, mul(n->rhs, n->rhs));
    }
    case Op::Pow: {
      const auto& base = n->lhs;
      const auto& exponent = n->rhs;
      if (is_const(exponent)) {
        auto lowered = pow(base, make_constant(exponent->value - 1.0));
        return mul(mul(exponent, lowered), diff(base, var));
      }
      // d(a^b) = a^b * (b' log a + b a' / a)
      auto term = add(mul(diff(exponent, var), unary(Op::Log, base)), div(mul(exponent, diff(base, var)), base));
      return mul(n, term);
    }
    case Op::Exp: return mul(n, diff(n->lhs, var));
    case Op::Log: return div(diff(n->lhs, var), n->lhs);
    case Op::Sin: return mul(unary(Op::Cos, n->lhs), diff(n->lhs, var));
    case Op::Cos: return neg(mul(unary(Op::Sin, n->lhs), diff(n->lhs, var)));
  }
  throw InvalidArgument("unknown expression node");
}

void print(const Expression::Node& n, std::ostringstream& os) {
  auto binary = [&](const char* sym) {
    os << '(';
    print(*n.lhs, os);
    os << ' ' << sym << ' ';
    print(*n.rhs, os);
    os << ')';
  };
  auto call = [&](const char* name) {
    os << name << '(';
    print(*n.lhs, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Constant: os << n.value; break;
    case Op::Variable: os << 'x' << (n.index + 1); break;
    case Op::Neg: os << "(-"; print(*n.lhs, os); os << ')'; break;
    case Op::Add: binary("+"); break;
    case Op::Sub: binary("-"); break;
    case Op::Mul: binary("*"); break;
    case Op::Div: binary("/"); break;
    case Op::Pow: binary("^"); break;
    case Op::Exp: call("exp"); break;
    case Op::Log: call("log"); break;
    case Op::Sin: call("sin"); break;
    case Op::Cos: call("cos"); break;
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t dimension) : text_(text), dim_(dimension) {}

  NodePtr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = add(lhs, term());
      else if (accept('-'))
        lhs = sub(lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary_expr();
    for (;;) {
      if (accept('*'))
        lhs = mul(lhs, unary_expr());
      else if (accept('/'))
        lhs = div(lhs, unary_expr());
      else
        return lhs;
    }
  }

  NodePtr unary_expr() {
    if (accept('-')) return neg(unary_expr());
    if (accept('+')) return unary_expr();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return pow(base, unary_expr());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return make_constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() > 1 && name[0] == 'x' &&
        name.substr(1).find_first_not_of("0123456789") == std::string_view::npos) {
      const std::size_t idx = std::stoul(std::string(name.substr(1)));
      if (idx < 1 || idx > dim_) {
        pos_ = start;
        fail("variable " + std::string(name) + " outside x1..x" + std::to_string(dim_));
      }
      return make_variable(idx - 1);
    }
    Op op;
    if (name == "exp")
      op = Op::Exp;
    else if (name == "log")
      op = Op::Log;
    else if (name == "sin")
      op = Op::Sin;
    else if (name == "cos")
      op = Op::Cos;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    auto arg = expr();
    expect(')');
    return unary(op, arg);
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, std::size_t dimension) {
  return Expression(Parser(text, dimension).parse());
}

Expression Expression::constant(double value) { return Expression(make_constant(value)); }

Expression Expression::variable(std::size_t index) { return Expression(make_variable(index)); }

double Expression::evaluate(std::span<const double> x) const { return eval(*root_, x); }

Expression Expression::derivative(std::size_t var) const { return Expression(diff(root_, var)); }

bool Expression::is_constant() const { return root_->op == Op::Constant; }

std::string Expression::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(*root_, os);
  return os.str();
}

}  // namespace nkcert
