#include "conelab/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace conelab {

namespace {

enum class Op { add, sub, mul, div, pow, neg, call_exp, call_sin, call_cos, num, var };

}  // namespace

struct Expression::Node {
  Op op;
  double num = 0.0;
  int var = -1;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  std::span<const std::string> names;

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) { ++pos; return true; }
    return false;
  }
  char peek() {
    skip();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression: " + what + " at offset " + std::to_string(pos));
  }

  NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op; n->a = std::move(a); n->b = std::move(b);
    return n;
  }

  NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::num; n->num = v;
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (eat('+')) n = make(Op::add, n, term());
      else if (eat('-')) n = make(Op::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = factor();
    while (true) {
      if (eat('*')) n = make(Op::mul, n, factor());
      else if (eat('/')) n = make(Op::div, n, factor());
      else return n;
    }
  }

  NodePtr factor() {
    if (eat('-')) return make(Op::neg, factor());
    if (eat('+')) return factor();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Op::pow, base, factor());  // right associative
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end;
      double v = std::stod(std::string(src.substr(pos)), &end);
      pos += end;
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      std::string id(src.substr(start, pos - start));
      if (peek() == '(') {
        Op call;
        if (id == "exp") call = Op::call_exp;
        else if (id == "sin") call = Op::call_sin;
        else if (id == "cos") call = Op::call_cos;
        else fail("unknown function '" + id + "'");
        ++pos;  // consume '('
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(call, arg);
      }
      if (id == "pi") return number(M_PI);
      if (id == "e") return number(M_E);
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == id) {
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::var; n->var = static_cast<int>(i);
          return n;
        }
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

// Integer powers work for any base (repeated multiplication); fractional
// exponents fall back to the series form and need a positive base.
double powi_or_general(double a, double b) { return std::pow(a, b); }

Jet powi_or_general(const Jet& a, double b) {
  double bi;
  if (std::modf(b, &bi) == 0.0 && std::abs(bi) <= 32) {
    int n = static_cast<int>(bi);
    Jet r = Jet::constant(1.0, a.nvars(), a.order());
    Jet base = n < 0 ? inverse(a) : a;
    for (int i = 0; i < std::abs(n); ++i) r = r * base;
    return r;
  }
  return pow(a, b);
}

template <class T>
T eval_node(const Expression::Node& n, std::span<const T> coords) {
  auto ev = [&](const Expression::Node& m) { return eval_node<T>(m, coords); };
  switch (n.op) {
    case Op::num:
      if constexpr (std::is_same_v<T, double>) return n.num;
      else return Jet::constant(n.num, coords.empty() ? 0 : coords[0].nvars(),
                                coords.empty() ? 0 : coords[0].order());
    case Op::var: return coords[n.var];
    case Op::add: return ev(*n.a) + ev(*n.b);
    case Op::sub: return ev(*n.a) - ev(*n.b);
    case Op::mul: return ev(*n.a) * ev(*n.b);
    case Op::div: return ev(*n.a) / ev(*n.b);
    case Op::neg: return -ev(*n.a);
    case Op::call_exp: return exp(ev(*n.a));
    case Op::call_sin: return sin(ev(*n.a));
    case Op::call_cos: return cos(ev(*n.a));
    case Op::pow: {
      T base = ev(*n.a);
      if (n.b->op == Op::num) return powi_or_general(base, n.b->num);
      T e = ev(*n.b);
      if constexpr (std::is_same_v<T, double>) return std::pow(base, e);
      else return exp(e * log(base));
    }
  }
  throw std::logic_error("expression: bad node");
}

}  // namespace

Expression Expression::parse(const std::string& text,
                             std::span<const std::string> coord_names) {
  Parser p{text, 0, coord_names};
  NodePtr root = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  Expression e;
  e.text_ = text;
  e.root_ = std::move(root);
  return e;
}

double Expression::eval(std::span<const double> coords) const {
  return eval_node<double>(*root_, coords);
}

Jet Expression::eval(std::span<const Jet> coords) const {
  if (coords.empty()) throw std::invalid_argument("expression: jet eval needs coords");
  return eval_node<Jet>(*root_, coords);
}

}  // namespace conelab
