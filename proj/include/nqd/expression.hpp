#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "nqd/errors.hpp"

namespace nqd {

/// Value with first and second derivative in one real variable.
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d, -a.dd}; }
inline Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd}; }
inline Jet operator/(Jet a, Jet b) {
  const double q = a.v / b.v;
  const double qd = (a.d - q * b.d) / b.v;
  const double qdd = (a.dd - 2 * qd * b.d - q * b.dd) / b.v;
  return {q, qd, qdd};
}

/// f(g) given f, f', f'' at g.v.
inline Jet chain(Jet g, double f, double f1, double f2) { return {f, f1 * g.d, f2 * g.d * g.d + f1 * g.dd}; }

/// Real expression in one variable `x` parsed once and evaluated as a Jet.
/// Grammar: + - * / ^, parentheses, numbers, pi, e, and the functions
/// sin cos tan exp log sqrt sinh cosh tanh.
class Expression {
 public:
  explicit Expression(std::string text) : text_(std::move(text)) {
    pos_ = 0;
    root_ = parse_sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  Jet operator()(double x) const { return root_->eval({x, 1.0, 0.0}); }
  const std::string& text() const { return text_; }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual Jet eval(Jet x) const = 0;
  };
  using Ptr = std::shared_ptr<const Node>;

  struct Const : Node {
    double c;
    explicit Const(double c) : c(c) {}
    Jet eval(Jet) const override { return {c, 0.0, 0.0}; }
  };
  struct Var : Node {
    Jet eval(Jet x) const override { return x; }
  };
  struct Binary : Node {
    char op;
    Ptr a, b;
    Binary(char op, Ptr a, Ptr b) : op(op), a(std::move(a)), b(std::move(b)) {}
    Jet eval(Jet x) const override {
      const Jet l = a->eval(x), r = b->eval(x);
      switch (op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/': return l / r;
        default: return power(l, r);
      }
    }
    static Jet power(Jet l, Jet r) {
      if (r.d == 0.0 && r.dd == 0.0) {
        const double p = r.v;
        return chain(l, std::pow(l.v, p), p * std::pow(l.v, p - 1), p * (p - 1) * std::pow(l.v, p - 2));
      }
      return exp(r * log(l));
    }
    static Jet exp(Jet g) {
      const double e = std::exp(g.v);
      return chain(g, e, e, e);
    }
    static Jet log(Jet g) { return chain(g, std::log(g.v), 1.0 / g.v, -1.0 / (g.v * g.v)); }
  };
  struct Neg : Node {
    Ptr a;
    explicit Neg(Ptr a) : a(std::move(a)) {}
    Jet eval(Jet x) const override { return -a->eval(x); }
  };
  struct Func : Node {
    std::string name;
    Ptr a;
    Func(std::string n, Ptr a) : name(std::move(n)), a(std::move(a)) {}
    Jet eval(Jet x) const override {
      const Jet g = a->eval(x);
      const double v = g.v;
      if (name == "sin") return chain(g, std::sin(v), std::cos(v), -std::sin(v));
      if (name == "cos") return chain(g, std::cos(v), -std::sin(v), -std::cos(v));
      if (name == "tan") {
        const double t = std::tan(v), s = 1 + t * t;
        return chain(g, t, s, 2 * t * s);
      }
      if (name == "exp") return Binary::exp(g);
      if (name == "log") return Binary::log(g);
      if (name == "sqrt") {
        const double s = std::sqrt(v);
        return chain(g, s, 0.5 / s, -0.25 / (s * v));
      }
      if (name == "sinh") return chain(g, std::sinh(v), std::cosh(v), std::sinh(v));
      if (name == "cosh") return chain(g, std::cosh(v), std::sinh(v), std::cosh(v));
      const double t = std::tanh(v), s = 1 - t * t;
      return chain(g, t, s, -2 * t * s);
    }
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + text_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }
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

  Ptr parse_sum() {
    Ptr l = parse_product();
    for (;;) {
      if (eat('+')) l = std::make_shared<Binary>('+', l, parse_product());
      else if (eat('-')) l = std::make_shared<Binary>('-', l, parse_product());
      else return l;
    }
  }
  Ptr parse_product() {
    Ptr l = parse_unary();
    for (;;) {
      if (eat('*')) l = std::make_shared<Binary>('*', l, parse_unary());
      else if (eat('/')) l = std::make_shared<Binary>('/', l, parse_unary());
      else return l;
    }
  }
  Ptr parse_unary() {
    if (eat('-')) return std::make_shared<Neg>(parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }
  Ptr parse_power() {
    Ptr base = parse_atom();
    if (eat('^')) return std::make_shared<Binary>('^', base, parse_unary());
    return base;
  }
  Ptr parse_atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (eat('(')) {
      Ptr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return std::make_shared<Const>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string id = text_.substr(start, pos_ - start);
      if (id == "x") return std::make_shared<Var>();
      if (id == "pi") return std::make_shared<Const>(std::numbers::pi);
      if (id == "e") return std::make_shared<Const>(std::numbers::e);
      static const std::vector<std::string> funcs{"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh"};
      for (const auto& f : funcs)
        if (id == f) {
          if (!eat('(')) fail("expected '(' after " + id);
          Ptr arg = parse_sum();
          if (!eat(')')) fail("expected ')'");
          return std::make_shared<Func>(id, arg);
        }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
  Ptr root_;
};

}  // namespace nqd
