#include "cosym/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "cosym/error.hpp"

namespace cosym::expr {

namespace {

NodePtr leaf_number(double v)
{
  auto n = std::make_shared<Node>();
  n->op = Op::number;
  n->value = v;
  return n;
}

const NodePtr & zero_node()
{
  static const NodePtr z = leaf_number(0.0);
  return z;
}

bool is_function(Op op)
{
  return op == Op::sin || op == Op::cos || op == Op::exp || op == Op::log || op == Op::sqrt;
}

double apply_fn(Op op, double a)
{
  switch (op) {
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::exp: return std::exp(a);
    case Op::log: return std::log(a);
    case Op::sqrt: return std::sqrt(a);
    default: break;
  }
  throw std::logic_error("apply_fn: not a function node");
}

const char * fn_name(Op op)
{
  switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    default: return "?";
  }
}

std::string format_number(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double v) : node_(leaf_number(v)) {}

Expr Expr::number(double v) { return Expr(v); }

Expr Expr::parameter(std::string name, double value)
{
  auto n = std::make_shared<Node>();
  n->op = Op::parameter;
  n->name = std::move(name);
  n->value = value;
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::variable(std::string name, int index)
{
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->name = std::move(name);
  n->index = index;
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::make(Op op, Expr a, Expr b)
{
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = a.node_;
  if (op != Op::neg && !is_function(op)) n->rhs = b.node_;
  return Expr(NodePtr(std::move(n)));
}

Expr operator+(const Expr & a, const Expr & b)
{
  if (a.is_number() && b.is_number()) return Expr(a.value() + b.value());
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (b.op() == Op::neg) return a - b.lhs();
  return Expr::make(Op::add, a, b);
}

Expr operator-(const Expr & a, const Expr & b)
{
  if (a.is_number() && b.is_number()) return Expr(a.value() - b.value());
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  if (b.op() == Op::neg) return a + b.lhs();
  return Expr::make(Op::sub, a, b);
}

Expr operator*(const Expr & a, const Expr & b)
{
  if (a.is_number() && b.is_number()) return Expr(a.value() * b.value());
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  if (a.op() == Op::neg) return -(a.lhs() * b);
  if (b.op() == Op::neg) return -(a * b.lhs());
  return Expr::make(Op::mul, a, b);
}

Expr operator/(const Expr & a, const Expr & b)
{
  if (a.is_number() && b.is_number() && b.value() != 0.0) return Expr(a.value() / b.value());
  if (a.is_number(0.0)) return Expr(0.0);
  if (b.is_number(1.0)) return a;
  if (a.op() == Op::neg) return -(a.lhs() / b);
  return Expr::make(Op::div, a, b);
}

Expr operator-(const Expr & a)
{
  if (a.is_number()) return Expr(-a.value());
  if (a.op() == Op::neg) return a.lhs();
  return Expr::make(Op::neg, a);
}

Expr pow(const Expr & base, const Expr & exponent)
{
  if (exponent.is_number(0.0)) return Expr(1.0);
  if (exponent.is_number(1.0)) return base;
  if (base.is_number() && exponent.is_number()) return Expr(std::pow(base.value(), exponent.value()));
  if (base.is_number(1.0)) return Expr(1.0);
  return Expr::make(Op::pow, base, exponent);
}

Expr apply(Op fn, const Expr & arg)
{
  if (!is_function(fn)) throw std::invalid_argument("expr::apply: not a function op");
  if (arg.is_number()) {
    double v = apply_fn(fn, arg.value());
    if (std::isfinite(v)) return Expr(v);
  }
  return Expr::make(fn, arg);
}

bool Expr::has_variables() const
{
  switch (op()) {
    case Op::number:
    case Op::parameter: return false;
    case Op::variable: return true;
    default: break;
  }
  if (lhs().has_variables()) return true;
  return node_->rhs && rhs().has_variables();
}

bool Expr::depends_on(int i) const
{
  switch (op()) {
    case Op::number:
    case Op::parameter: return false;
    case Op::variable: return index() == i;
    default: break;
  }
  if (lhs().depends_on(i)) return true;
  return node_->rhs && rhs().depends_on(i);
}

double Expr::evaluate(std::span<const double> vars) const
{
  const Node & n = *node_;
  switch (n.op) {
    case Op::number:
    case Op::parameter: return n.value;
    case Op::variable:
      if (n.index < 0 || static_cast<std::size_t>(n.index) >= vars.size())
        throw std::out_of_range("variable '" + n.name + "' has no value");
      return vars[static_cast<std::size_t>(n.index)];
    case Op::neg: return -lhs().evaluate(vars);
    case Op::add: return lhs().evaluate(vars) + rhs().evaluate(vars);
    case Op::sub: return lhs().evaluate(vars) - rhs().evaluate(vars);
    case Op::mul: return lhs().evaluate(vars) * rhs().evaluate(vars);
    case Op::div: return lhs().evaluate(vars) / rhs().evaluate(vars);
    case Op::pow: {
      double e = rhs().evaluate(vars);
      double b = lhs().evaluate(vars);
      if (e == 2.0) return b * b;
      return std::pow(b, e);
    }
    default: return apply_fn(n.op, lhs().evaluate(vars));
  }
}

Expr Expr::derivative(int i) const
{
  if (!depends_on(i)) return Expr(0.0);
  const Expr a = node_->lhs ? lhs() : Expr();
  switch (op()) {
    case Op::variable: return Expr(1.0);
    case Op::neg: return -a.derivative(i);
    case Op::add: return a.derivative(i) + rhs().derivative(i);
    case Op::sub: return a.derivative(i) - rhs().derivative(i);
    case Op::mul: {
      const Expr b = rhs();
      return a.derivative(i) * b + a * b.derivative(i);
    }
    case Op::div: {
      const Expr b = rhs();
      if (!b.depends_on(i)) return a.derivative(i) / b;
      return (a.derivative(i) * b - a * b.derivative(i)) / pow(b, Expr(2.0));
    }
    case Op::pow: {
      const Expr b = rhs();
      if (!b.has_variables()) return b * pow(a, b - Expr(1.0)) * a.derivative(i);
      return *this * (b.derivative(i) * log(a) + b * a.derivative(i) / a);
    }
    case Op::sin: return cos(a) * a.derivative(i);
    case Op::cos: return -(sin(a) * a.derivative(i));
    case Op::exp: return *this * a.derivative(i);
    case Op::log: return a.derivative(i) / a;
    case Op::sqrt: return a.derivative(i) / (Expr(2.0) * *this);
    default: break;
  }
  return Expr(0.0);
}

Expr Expr::substitute(const std::vector<Expr> & replacements) const
{
  switch (op()) {
    case Op::number:
    case Op::parameter: return *this;
    case Op::variable:
      if (index() < 0 || static_cast<std::size_t>(index()) >= replacements.size())
        throw std::out_of_range("substitute: no replacement for '" + name() + "'");
      return replacements[static_cast<std::size_t>(index())];
    case Op::neg: return -lhs().substitute(replacements);
    case Op::add: return lhs().substitute(replacements) + rhs().substitute(replacements);
    case Op::sub: return lhs().substitute(replacements) - rhs().substitute(replacements);
    case Op::mul: return lhs().substitute(replacements) * rhs().substitute(replacements);
    case Op::div: return lhs().substitute(replacements) / rhs().substitute(replacements);
    case Op::pow: return pow(lhs().substitute(replacements), rhs().substitute(replacements));
    default: return apply(op(), lhs().substitute(replacements));
  }
}

namespace {

// precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom
int precedence(const Expr & e)
{
  switch (e.op()) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    case Op::number: return e.value() < 0 ? 3 : 5;
    default: return 5;
  }
}

void print(std::ostream & os, const Expr & e);

void print_wrapped(std::ostream & os, const Expr & e, bool wrap)
{
  if (wrap) os << '(';
  print(os, e);
  if (wrap) os << ')';
}

void print(std::ostream & os, const Expr & e)
{
  const int p = precedence(e);
  switch (e.op()) {
    case Op::number: os << format_number(e.value()); return;
    case Op::parameter:
    case Op::variable: os << e.name(); return;
    case Op::neg:
      os << '-';
      print_wrapped(os, e.lhs(), precedence(e.lhs()) < 4);
      return;
    case Op::add:
    case Op::sub:
      print_wrapped(os, e.lhs(), precedence(e.lhs()) < p);
      os << (e.op() == Op::add ? " + " : " - ");
      print_wrapped(os, e.rhs(), precedence(e.rhs()) <= p);
      return;
    case Op::mul:
    case Op::div:
      print_wrapped(os, e.lhs(), precedence(e.lhs()) < p);
      os << (e.op() == Op::mul ? "*" : "/");
      print_wrapped(os, e.rhs(), precedence(e.rhs()) <= p);
      return;
    case Op::pow:
      print_wrapped(os, e.lhs(), precedence(e.lhs()) <= p);
      os << '^';
      print_wrapped(os, e.rhs(), precedence(e.rhs()) < p);
      return;
    default:
      os << fn_name(e.op()) << '(';
      print(os, e.lhs());
      os << ')';
      return;
  }
}

}  // namespace

std::string Expr::to_string() const
{
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

// ---------------------------------------------------------------- parser

namespace {

class Parser
{
public:
  Parser(std::string_view text, const SymbolTable & symbols) : text_(text), symbols_(symbols) {}

  Expr run()
  {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character", {"operator", "end of input"});
    return e;
  }

private:
  [[noreturn]] void fail(const std::string & what, std::vector<std::string> expected)
  {
    std::ostringstream msg;
    msg << what << " at offset " << pos_;
    if (!expected.empty()) {
      msg << "; expected one of:";
      for (const auto & e : expected) msg << ' ' << e;
    }
    throw ParseError(msg.str(), pos_, std::move(expected));
  }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c)
  {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum()
  {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) e = e + parse_product();
      else if (accept('-')) e = e - parse_product();
      else return e;
    }
  }

  Expr parse_product()
  {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) e = e * parse_unary();
      else if (accept('/')) e = e / parse_unary();
      else return e;
    }
  }

  Expr parse_unary()
  {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power()
  {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_primary()
  {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input", {"number", "identifier", "(", "-"});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail("unbalanced parenthesis", {")"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'", {"number", "identifier", "(", "-"});
  }

  Expr parse_number()
  {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
      else pos_ = save;
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return Expr(v);
  }

  Expr parse_identifier()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      static const std::pair<std::string_view, Op> fns[] = {
          {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"log", Op::log}, {"sqrt", Op::sqrt}};
      for (const auto & [name, op] : fns) {
        if (name == id) {
          ++pos_;
          Expr arg = parse_sum();
          if (!accept(')')) fail("unbalanced parenthesis", {")"});
          return apply(op, arg);
        }
      }
      pos_ = start;
      fail("unknown function '" + std::string(id) + "'", {"sin", "cos", "exp", "log", "sqrt"});
    }

    for (std::size_t i = 0; i < symbols_.variables.size(); ++i)
      if (symbols_.variables[i] == id) return Expr::variable(std::string(id), static_cast<int>(i));
    if (auto it = symbols_.parameters.find(id); it != symbols_.parameters.end())
      return Expr::parameter(it->first, it->second);

    std::vector<std::string> known(symbols_.variables.begin(), symbols_.variables.end());
    for (const auto & [name, value] : symbols_.parameters) known.push_back(name);
    pos_ = start;
    fail("unknown identifier '" + std::string(id) + "'", std::move(known));
  }

  std::string_view text_;
  const SymbolTable & symbols_;
  std::size_t pos_{0};
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable & symbols)
{
  return Parser(text, symbols).run();
}

}  // namespace cosym::expr
