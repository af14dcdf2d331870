#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cosym/chart.hpp"
#include "cosym/expr.hpp"

namespace cosym {

enum class DerivativeMode { symbolic, finite_difference };

/// Central-difference step for coordinate value `x`: max(1,|x|) * eps^(1/3).
double fd_step(double x);

/**
 * Real function on a chart: either an expression tree (exact derivatives) or
 * an opaque evaluator (finite differences). Cheap to copy; shares state.
 */
class ScalarField
{
public:
  using Evaluator = std::function<double(std::span<const double>)>;

  ScalarField(ChartRef chart, expr::Expr body);
  ScalarField(ChartRef chart, Evaluator body);

  static ScalarField constant(ChartRef chart, double value);
  static ScalarField coordinate(ChartRef chart, std::string_view name);
  static ScalarField coordinate(ChartRef chart, int index);
  /// Parse `text` against the chart coordinates and `parameters`.
  static ScalarField parse(ChartRef chart, std::string_view text, const Parameters & parameters = {});

  const ChartRef & chart() const noexcept;
  bool is_symbolic() const noexcept;
  /// Expression body; throws if the field is opaque.
  const expr::Expr & expression() const;
  DerivativeMode mode() const noexcept;
  /// Same body, different derivative mode (symbolic -> FD always allowed).
  ScalarField with_mode(DerivativeMode mode) const;

  /// Exactly the constant zero (symbolic only).
  bool is_zero() const noexcept;

  double operator()(const ChartPoint & at) const;
  /// Unchecked evaluation on raw coordinates.
  double evaluate(std::span<const double> x) const;
  double evaluate(const Eigen::VectorXd & x) const
  {
    return evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  /// Partial derivative as a field (cached for symbolic bodies).
  ScalarField derivative(int i) const;
  ScalarField derivative(std::string_view coordinate) const;
  Eigen::VectorXd gradient(const ChartPoint & at) const;
  Eigen::VectorXd gradient(std::span<const double> x) const;

  std::string to_string() const;

private:
  struct Impl;
  explicit ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

ScalarField operator+(const ScalarField & a, const ScalarField & b);
ScalarField operator-(const ScalarField & a, const ScalarField & b);
ScalarField operator*(const ScalarField & a, const ScalarField & b);
ScalarField operator/(const ScalarField & a, const ScalarField & b);
ScalarField operator-(const ScalarField & a);
ScalarField operator*(double s, const ScalarField & a);

/// One component field per chart coordinate.
class VectorField
{
public:
  VectorField(ChartRef chart, std::vector<ScalarField> components);
  /// Constant-coefficient field.
  static VectorField constant(ChartRef chart, const Eigen::VectorXd & components);

  const ChartRef & chart() const noexcept { return chart_; }
  const std::vector<ScalarField> & components() const noexcept { return components_; }
  Eigen::VectorXd operator()(const ChartPoint & at) const;

private:
  ChartRef chart_;
  std::vector<ScalarField> components_;
};

}  // namespace cosym
