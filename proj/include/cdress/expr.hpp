#ifndef CDRESS_EXPR_HPP
#define CDRESS_EXPR_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <string>

#include "cdress/errors.hpp"
#include "cdress/forms.hpp"
#include "cdress/jet.hpp"

namespace cdress {

/// Closed-form scalar field of the chart coordinates:
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := '-' unary | power
///   power := primary ('^' '-'? integer)?
///   primary := number | x0..x3 | exp(expr) | log(expr) | '(' expr ')'
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, PowInt, Exp, Log };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double c) { return Expr(std::make_shared<Node>(Node{Op::Const, c, 0, nullptr, nullptr})); }
  static Expr variable(int mu) {
    if (mu < 0 || mu >= kChartDim) throw std::out_of_range("chart variable index");
    return Expr(std::make_shared<Node>(Node{Op::Var, 0.0, mu, nullptr, nullptr}));
  }

  static Expr parse(const std::string& text) {
    Parser p{text, 0};
    Expr e = p.expression();
    p.skipSpace();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return e;
  }

  Op op() const { return node_->op; }
  bool isConstant() const { return node_->op == Op::Const; }
  double constantValue() const { return node_->value; }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  Expr operator-() const { return Expr(std::make_shared<Node>(Node{Op::Neg, 0.0, 0, node_, nullptr})); }
  Expr pow(int n) const { return Expr(std::make_shared<Node>(Node{Op::PowInt, 0.0, n, node_, nullptr})); }
  friend Expr exp(const Expr& a) { return Expr(std::make_shared<Node>(Node{Op::Exp, 0.0, 0, a.node_, nullptr})); }
  friend Expr log(const Expr& a) { return Expr(std::make_shared<Node>(Node{Op::Log, 0.0, 0, a.node_, nullptr})); }

  /// Jet of the field about p. Constants are exact.
  template <typename T, int N>
  Jet<T, N> evaluate(const ChartPoint& p) const {
    return eval<T, N>(*node_, p);
  }

  double operator()(const ChartPoint& p) const { return evalPlain(*node_, p); }

  /// Text form that parses back to the same tree (constants printed with %.17g).
  std::string toString() const { return print(*node_, 0); }

 private:
  struct Node {
    Op op;
    double value;
    int index;  // variable index or integer exponent
    std::shared_ptr<const Node> a, b;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<Node>(Node{op, 0.0, 0, a.node_, b.node_}));
  }

  template <typename T, int N>
  static Jet<T, N> eval(const Node& n, const ChartPoint& p) {
    using J = Jet<T, N>;
    switch (n.op) {
      case Op::Const:
        return J(T(n.value));
      case Op::Var:
        return J::variable(p[n.index], n.index);
      case Op::Add:
        return eval<T, N>(*n.a, p) + eval<T, N>(*n.b, p);
      case Op::Sub:
        return eval<T, N>(*n.a, p) - eval<T, N>(*n.b, p);
      case Op::Mul:
        return eval<T, N>(*n.a, p) * eval<T, N>(*n.b, p);
      case Op::Div: {
        const J den = eval<T, N>(*n.b, p);
        if (den.value() == T(0)) throw DegenerateField("division by zero in expression", p.x);
        return eval<T, N>(*n.a, p) / den;
      }
      case Op::Neg:
        return -eval<T, N>(*n.a, p);
      case Op::PowInt: {
        const J base = eval<T, N>(*n.a, p);
        if (n.index < 0 && base.value() == T(0)) throw DegenerateField("negative power of zero in expression", p.x);
        return powInt(base, n.index);
      }
      case Op::Exp:
        return exp(eval<T, N>(*n.a, p));
      case Op::Log: {
        const J arg = eval<T, N>(*n.a, p);
        if (!(std::real(arg.value()) > 0)) throw DegenerateField("log of a non-positive argument", p.x);
        return log(arg);
      }
    }
    throw std::logic_error("unreachable expression node");
  }

  static double evalPlain(const Node& n, const ChartPoint& p) {
    switch (n.op) {
      case Op::Const:
        return n.value;
      case Op::Var:
        return p[n.index];
      case Op::Add:
        return evalPlain(*n.a, p) + evalPlain(*n.b, p);
      case Op::Sub:
        return evalPlain(*n.a, p) - evalPlain(*n.b, p);
      case Op::Mul:
        return evalPlain(*n.a, p) * evalPlain(*n.b, p);
      case Op::Div:
        return evalPlain(*n.a, p) / evalPlain(*n.b, p);
      case Op::Neg:
        return -evalPlain(*n.a, p);
      case Op::PowInt:
        return std::pow(evalPlain(*n.a, p), n.index);
      case Op::Exp:
        return std::exp(evalPlain(*n.a, p));
      case Op::Log:
        return std::log(evalPlain(*n.a, p));
    }
    throw std::logic_error("unreachable expression node");
  }

  static int precedence(Op op) {
    switch (op) {
      case Op::Add:
      case Op::Sub:
        return 1;
      case Op::Mul:
      case Op::Div:
        return 2;
      case Op::Neg:
        return 3;
      case Op::PowInt:
        return 4;
      default:
        return 5;
    }
  }

  static std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (v < 0 || s.find_first_of("ni") != std::string::npos) return "(" + s + ")";
    return s;
  }

  static std::string print(const Node& n, int outer) {
    std::string s;
    switch (n.op) {
      case Op::Const:
        return number(n.value);
      case Op::Var:
        return "x" + std::to_string(n.index);
      case Op::Add:
        s = print(*n.a, 1) + " + " + print(*n.b, 2);
        break;
      case Op::Sub:
        s = print(*n.a, 1) + " - " + print(*n.b, 2);
        break;
      case Op::Mul:
        s = print(*n.a, 2) + "*" + print(*n.b, 3);
        break;
      case Op::Div:
        s = print(*n.a, 2) + "/" + print(*n.b, 3);
        break;
      case Op::Neg:
        s = n.a->op == Op::Const ? "-(" + print(*n.a, 0) + ")" : "-" + print(*n.a, 3);
        break;
      case Op::PowInt:
        s = print(*n.a, 5) + "^" + (n.index < 0 ? "(" + std::to_string(n.index) + ")" : std::to_string(n.index));
        break;
      case Op::Exp:
        return "exp(" + print(*n.a, 0) + ")";
      case Op::Log:
        return "log(" + print(*n.a, 0) + ")";
    }
    return precedence(n.op) < outer ? "(" + s + ")" : s;
  }

  struct Parser {
    const std::string& text;
    size_t pos;

    [[noreturn]] void fail(const std::string& what) const {
      throw ParseError("expression parse error at offset " + std::to_string(pos) + ": " + what + " in \"" + text + "\"");
    }
    void skipSpace() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool accept(char c) {
      skipSpace();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    bool acceptWord(const char* w) {
      skipSpace();
      const size_t n = std::char_traits<char>::length(w);
      if (text.compare(pos, n, w) == 0) {
        pos += n;
        return true;
      }
      return false;
    }

    Expr expression() {
      Expr e = term();
      for (;;) {
        if (accept('+'))
          e = e + term();
        else if (accept('-'))
          e = e - term();
        else
          return e;
      }
    }
    Expr term() {
      Expr e = unary();
      for (;;) {
        if (accept('*'))
          e = e * unary();
        else if (accept('/'))
          e = e / unary();
        else
          return e;
      }
    }
    Expr unary() {
      if (accept('-')) {
        skipSpace();
        // A literal right after '-' is one negative constant unless raised to a power.
        if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
          const Expr lit = primary();
          skipSpace();
          if (pos < text.size() && text[pos] == '^') {
            ++pos;
            return -exponent(lit);
          }
          return constant(-lit.constantValue());
        }
        return -unary();
      }
      if (accept('+')) return unary();
      return power();
    }
    Expr power() {
      Expr base = primary();
      if (!accept('^')) return base;
      return exponent(base);
    }
    Expr exponent(const Expr& base) {
      const bool paren = accept('(');
      const bool neg = accept('-');
      skipSpace();
      const size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) fail("integer exponent expected");
      int n = std::stoi(text.substr(start, pos - start));
      if (paren && !accept(')')) fail("')' expected");
      return base.pow(neg ? -n : n);
    }
    Expr primary() {
      skipSpace();
      if (pos >= text.size()) fail("unexpected end of input");
      if (accept('(')) {
        Expr e = expression();
        if (!accept(')')) fail("')' expected");
        return e;
      }
      if (acceptWord("exp")) return exp(call());
      if (acceptWord("log")) return log(call());
      if (text[pos] == 'x') {
        ++pos;
        if (pos < text.size() && text[pos] >= '0' && text[pos] <= '3') return variable(text[pos++] - '0');
        fail("variable must be x0, x1, x2 or x3");
      }
      const char* begin = text.c_str() + pos;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin || !(std::isdigit(static_cast<unsigned char>(*begin)) || *begin == '.')) fail("number expected");
      pos += static_cast<size_t>(end - begin);
      return constant(v);
    }
    Expr call() {
      if (!accept('(')) fail("'(' expected after function name");
      Expr e = expression();
      if (!accept(')')) fail("')' expected");
      return e;
    }
  };

  std::shared_ptr<const Node> node_;
};

/// Random polynomial of total degree <= degree with coefficients in
/// [-amplitude, amplitude]; the constant term is `offset` plus noise.
inline Expr randomPolynomial(std::mt19937_64& rng, int degree, double amplitude, double offset = 0.0) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  Expr e = Expr::constant(offset + u(rng));
  const auto& basis = MonomialBasis<3>::instance();
  for (int i = 1; i < basis.countUpTo(std::min(degree, 3)); ++i) {
    Expr m = Expr::constant(u(rng));
    for (int mu = 0; mu < kChartDim; ++mu) {
      const int k = basis.exponents(i)[mu];
      if (k == 1)
        m = m * Expr::variable(mu);
      else if (k > 1)
        m = m * Expr::variable(mu).pow(k);
    }
    e = e + m;
  }
  return e;
}

}  // namespace cdress

#endif  // CDRESS_EXPR_HPP
