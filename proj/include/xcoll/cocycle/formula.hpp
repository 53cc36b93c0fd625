#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xcoll/core/error.hpp"
#include "xcoll/core/intmath.hpp"

namespace xcoll::cocycle {

// Integer polynomial expressions in named variables, e.g. "2*m*(k'+l') - k*l'".
class Polynomial {
 public:
  explicit Polynomial(std::string text) : text_(std::move(text)) {
    pos_ = 0;
    root_ = parse_sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  intmath::Int eval(const std::map<std::string, intmath::Int>& vars) const { return eval(*root_, vars); }
  const std::string& text() const { return text_; }
  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    collect(*root_, out);
    return out;
  }

 private:
  struct Node {
    char op = 0;  // '+', '-', '*', '^', 'n' (number), 'v' (variable), 'u' (negation)
    intmath::Int value = 0;
    std::string name;
    std::unique_ptr<Node> a, b;
  };
  using P = std::unique_ptr<Node>;

  [[noreturn]] void fail(const std::string& m) const { throw UsageError("formula '" + text_ + "': " + m); }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static P bin(char op, P a, P b) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  P parse_sum() {
    P lhs = parse_product();
    for (;;) {
      if (eat('+'))
        lhs = bin('+', std::move(lhs), parse_product());
      else if (eat('-'))
        lhs = bin('-', std::move(lhs), parse_product());
      else
        return lhs;
    }
  }
  P parse_product() {
    P lhs = parse_power();
    for (;;) {
      if (eat('*')) {
        lhs = bin('*', std::move(lhs), parse_power());
        continue;
      }
      // implicit multiplication: "2m", "m(k'+l')"
      skip();
      if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(')) {
        lhs = bin('*', std::move(lhs), parse_power());
        continue;
      }
      return lhs;
    }
  }
  P parse_power() {
    P base = parse_unary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a nonnegative integer");
      auto e = std::make_unique<Node>();
      e->op = 'n';
      e->value = std::stoll(text_.substr(start, pos_ - start));
      return bin('^', std::move(base), std::move(e));
    }
    return base;
  }
  P parse_unary() {
    if (eat('-')) {
      auto n = std::make_unique<Node>();
      n->op = 'u';
      n->a = parse_unary();
      return n;
    }
    if (eat('+')) return parse_unary();
    if (eat('(')) {
      P inner = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    auto n = std::make_unique<Node>();
    if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      n->op = 'n';
      n->value = std::stoll(text_.substr(start, pos_ - start));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      while (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
      n->op = 'v';
      n->name = text_.substr(start, pos_ - start);
      return n;
    }
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  intmath::Int eval(const Node& n, const std::map<std::string, intmath::Int>& vars) const {
    using namespace intmath;
    switch (n.op) {
      case 'n':
        return n.value;
      case 'v': {
        auto it = vars.find(n.name);
        if (it == vars.end()) fail("unknown variable '" + n.name + "'");
        return it->second;
      }
      case 'u':
        return mul(-1, eval(*n.a, vars));
      case '+':
        return add(eval(*n.a, vars), eval(*n.b, vars));
      case '-':
        return sub(eval(*n.a, vars), eval(*n.b, vars));
      case '*':
        return mul(eval(*n.a, vars), eval(*n.b, vars));
      case '^': {
        Int base = eval(*n.a, vars), r = 1;
        for (Int i = 0; i < n.b->value; ++i) r = mul(r, base);
        return r;
      }
    }
    fail("corrupt expression");
  }
  static void collect(const Node& n, std::vector<std::string>& out) {
    if (n.op == 'v' && std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
    if (n.a) collect(*n.a, out);
    if (n.b) collect(*n.b, out);
  }

  std::string text_;
  std::size_t pos_ = 0;
  P root_;
};

}  // namespace xcoll::cocycle
