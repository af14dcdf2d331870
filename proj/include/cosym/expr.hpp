#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cosym {

/// Named model parameters (k, nu, delta, ...) substituted into expressions.
using Parameters = std::map<std::string, double, std::less<>>;

namespace expr {

enum class Op : unsigned char {
  number,
  parameter,
  variable,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  sin,
  cos,
  exp,
  log,
  sqrt,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node
{
  Op op{Op::number};
  double value{0.0};  // number or bound parameter value
  int index{-1};      // variable slot
  std::string name;   // parameter or variable name
  NodePtr lhs;
  NodePtr rhs;
};

/**
 * Immutable expression tree over chart variables and named parameters.
 *
 * Constructors fold constants and drop neutral elements, so derivatives of
 * polynomial bodies stay small. Parameters are kept as named leaves (never
 * folded) so that printing reproduces the source names.
 */
class Expr
{
public:
  Expr();
  explicit Expr(double v);

  static Expr number(double v);
  static Expr parameter(std::string name, double value);
  static Expr variable(std::string name, int index);

  Op op() const noexcept { return node_->op; }
  double value() const noexcept { return node_->value; }
  int index() const noexcept { return node_->index; }
  const std::string & name() const noexcept { return node_->name; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }

  bool is_number() const noexcept { return node_->op == Op::number; }
  bool is_number(double v) const noexcept { return is_number() && node_->value == v; }

  /// True when some variable leaf appears in the tree.
  bool has_variables() const;
  /// True when variable `i` appears in the tree.
  bool depends_on(int i) const;

  double evaluate(std::span<const double> vars) const;

  /// Exact partial derivative with respect to variable slot `i`.
  Expr derivative(int i) const;

  /// Replace variable slot i by `replacements[i]` (new variables come from the replacements).
  Expr substitute(const std::vector<Expr> & replacements) const;

  std::string to_string() const;

  const NodePtr & node() const noexcept { return node_; }

  friend Expr operator+(const Expr & a, const Expr & b);
  friend Expr operator-(const Expr & a, const Expr & b);
  friend Expr operator*(const Expr & a, const Expr & b);
  friend Expr operator/(const Expr & a, const Expr & b);
  friend Expr operator-(const Expr & a);

private:
  explicit Expr(NodePtr n) : node_(std::move(n)) {}
  static Expr make(Op op, Expr a, Expr b = Expr());

  friend Expr pow(const Expr &, const Expr &);
  friend Expr apply(Op, const Expr &);

  NodePtr node_;
};

Expr pow(const Expr & base, const Expr & exponent);
/// Unary function node (sin, cos, exp, log, sqrt) with constant folding.
Expr apply(Op fn, const Expr & arg);
inline Expr sin(const Expr & a) { return apply(Op::sin, a); }
inline Expr cos(const Expr & a) { return apply(Op::cos, a); }
inline Expr exp(const Expr & a) { return apply(Op::exp, a); }
inline Expr log(const Expr & a) { return apply(Op::log, a); }
inline Expr sqrt(const Expr & a) { return apply(Op::sqrt, a); }

/// Identifiers visible to the parser: chart coordinates (by slot) and parameters.
struct SymbolTable
{
  std::vector<std::string> variables;
  Parameters parameters;
};

/**
 * Parse an expression.
 *
 * Grammar: decimal literals, identifiers, + - * / ^ (right-associative),
 * unary minus, parentheses and the functions sin, cos, exp, log, sqrt.
 * Whitespace is ignored. Throws ParseError carrying the byte offset and the
 * set of tokens that would have been accepted there.
 */
Expr parse(std::string_view text, const SymbolTable & symbols);

}  // namespace expr
}  // namespace cosym
