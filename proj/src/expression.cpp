#include "monotone/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "monotone/error.hpp"

namespace monotone {

struct Expression::Node {
  enum class Op { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Func } op = Op::Number;
  double value = 0.0;
  int var = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const double* u) const {
    switch (op) {
      case Op::Number: return value;
      case Op::Var: return u[var];
      case Op::Add: return a->eval(u) + b->eval(u);
      case Op::Sub: return a->eval(u) - b->eval(u);
      case Op::Mul: return a->eval(u) * b->eval(u);
      case Op::Div: return a->eval(u) / b->eval(u);
      case Op::Pow: return std::pow(a->eval(u), b->eval(u));
      case Op::Neg: return -a->eval(u);
      case Op::Func: return fn(a->eval(u));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, int vars) : s_(s), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      return identifier(name);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr identifier(const std::string& name) {
    static const std::vector<std::pair<const char*, double (*)(double)>> funcs = {
        {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
        {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
        {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
        {"tanh", [](double x) { return std::tanh(x); }}, {"cosh", [](double x) { return std::cosh(x); }},
        {"sinh", [](double x) { return std::sinh(x); }}, {"abs", [](double x) { return std::abs(x); }},
    };
    for (const auto& [fname, fn] : funcs) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::Func;
        n->fn = fn;
        n->a = arg;
        return n;
      }
    }
    auto n = std::make_shared<Expression::Node>();
    if (name == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (name == "e") {
      n->value = std::numbers::e;
      return n;
    }
    int var = -1;
    if (name == "u") var = 0;
    else if (name == "v") var = 1;
    else if (name.size() > 1 && name[0] == 'u' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
      var = std::atoi(name.c_str() + 1) - 1;
    }
    if (var < 0 || var >= vars_) fail("unknown identifier '" + name + "'");
    n->op = Op::Var;
    n->var = var;
    return n;
  }

  const std::string& s_;
  int vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text, int variables) : text_(text) {
  root_ = Parser(text_, variables).parse();
}

double Expression::operator()(const double* u) const {
  if (!root_) throw ArgumentError("empty expression evaluated");
  return root_->eval(u);
}

}  // namespace monotone
