#pragma once

// Restricted arithmetic expressions over variables x1..xn.
//
// Grammar (usual precedence, '^' is right associative and binds tighter
// than unary minus, so -x1^2 == -(x1^2)):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' index | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sin | cos

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace nkcert {

class Expression {
 public:
  struct Node;

  /// Parses `text`; variables must satisfy 1 <= index <= dimension.
  static Expression parse(std::string_view text, std::size_t dimension);

  static Expression constant(double value);
  static Expression variable(std::size_t index);  // zero-based

  double evaluate(std::span<const double> x) const;

  /// Symbolic partial derivative with respect to the zero-based variable.
  Expression derivative(std::size_t var) const;

  bool is_constant() const;
  std::string to_string() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
};

}  // namespace nkcert
