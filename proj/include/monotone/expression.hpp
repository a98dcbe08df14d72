#pragma once

#include <memory>
#include <string>

namespace monotone {

/// Arithmetic expression over variables u1..um (u and v alias u1 and u2).
/// Operators + - * / ^, parentheses, functions sin cos tan exp log sqrt tanh
/// cosh sinh abs, constants pi and e.
class Expression {
 public:
  Expression() = default;
  Expression(const std::string& text, int variables);

  double operator()(const double* u) const;
  const std::string& text() const { return text_; }
  bool empty() const { return !root_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace monotone
