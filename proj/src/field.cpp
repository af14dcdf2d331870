#include "cosym/field.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

#include "cosym/error.hpp"

namespace cosym {

double fd_step(double x)
{
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(1.0, std::abs(x)) * base;
}

struct ScalarField::Impl
{
  ChartRef chart;
  std::optional<expr::Expr> body;
  Evaluator eval;
  DerivativeMode mode{DerivativeMode::symbolic};

  mutable std::mutex cache_mutex;
  mutable std::vector<std::shared_ptr<const Impl>> cache;

  double evaluate(std::span<const double> x) const { return body ? body->evaluate(x) : eval(x); }
};

ScalarField::ScalarField(ChartRef chart, expr::Expr body)
{
  auto impl = std::make_shared<Impl>();
  impl->chart = std::move(chart);
  impl->body = std::move(body);
  impl->mode = DerivativeMode::symbolic;
  impl_ = std::move(impl);
}

ScalarField::ScalarField(ChartRef chart, Evaluator body)
{
  if (!body) throw Error("ScalarField: empty evaluator");
  auto impl = std::make_shared<Impl>();
  impl->chart = std::move(chart);
  impl->eval = std::move(body);
  impl->mode = DerivativeMode::finite_difference;
  impl_ = std::move(impl);
}

ScalarField ScalarField::constant(ChartRef chart, double value) { return {std::move(chart), expr::Expr(value)}; }

ScalarField ScalarField::coordinate(ChartRef chart, std::string_view name)
{
  int i = chart->index_of(name);
  return coordinate(std::move(chart), i);
}

ScalarField ScalarField::coordinate(ChartRef chart, int index)
{
  if (index < 0 || index >= chart->dimension()) throw ChartMismatch("coordinate index out of range");
  auto name = chart->coordinates()[static_cast<std::size_t>(index)];
  return {std::move(chart), expr::Expr::variable(std::move(name), index)};
}

ScalarField ScalarField::parse(ChartRef chart, std::string_view text, const Parameters & parameters)
{
  auto body = expr::parse(text, chart->symbols(parameters));
  return {std::move(chart), std::move(body)};
}

const ChartRef & ScalarField::chart() const noexcept { return impl_->chart; }

bool ScalarField::is_symbolic() const noexcept { return impl_->body.has_value(); }

const expr::Expr & ScalarField::expression() const
{
  if (!impl_->body) throw Error("ScalarField: field has no expression body");
  return *impl_->body;
}

DerivativeMode ScalarField::mode() const noexcept { return impl_->mode; }

ScalarField ScalarField::with_mode(DerivativeMode mode) const
{
  if (mode == impl_->mode) return *this;
  if (mode == DerivativeMode::symbolic && !impl_->body)
    throw Error("ScalarField: opaque field cannot use symbolic derivatives");
  auto impl = std::make_shared<Impl>();
  impl->chart = impl_->chart;
  impl->body = impl_->body;
  impl->eval = impl_->eval;
  impl->mode = mode;
  return ScalarField(std::shared_ptr<const Impl>(std::move(impl)));
}

bool ScalarField::is_zero() const noexcept { return impl_->body && impl_->body->is_number(0.0); }

double ScalarField::operator()(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *impl_->chart, "ScalarField evaluation");
  return impl_->evaluate(at.span());
}

double ScalarField::evaluate(std::span<const double> x) const { return impl_->evaluate(x); }

ScalarField ScalarField::derivative(int i) const
{
  const int d = impl_->chart->dimension();
  if (i < 0 || i >= d) throw ChartMismatch("derivative index out of range");
  std::lock_guard lock(impl_->cache_mutex);
  if (impl_->cache.empty()) impl_->cache.resize(static_cast<std::size_t>(d));
  auto & slot = impl_->cache[static_cast<std::size_t>(i)];
  if (!slot) {
    auto impl = std::make_shared<Impl>();
    impl->chart = impl_->chart;
    impl->mode = impl_->mode;
    if (impl_->mode == DerivativeMode::symbolic) {
      impl->body = impl_->body->derivative(i);
    } else {
      std::shared_ptr<const Impl> parent = impl_;
      impl->eval = [parent, i](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        const double h = fd_step(x[static_cast<std::size_t>(i)]);
        y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h;
        const double fp = parent->evaluate(y);
        y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - h;
        const double fm = parent->evaluate(y);
        return (fp - fm) / (2.0 * h);
      };
    }
    slot = std::move(impl);
  }
  return ScalarField(slot);
}

ScalarField ScalarField::derivative(std::string_view coordinate) const
{
  return derivative(impl_->chart->index_of(coordinate));
}

Eigen::VectorXd ScalarField::gradient(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *impl_->chart, "ScalarField gradient");
  return gradient(at.span());
}

Eigen::VectorXd ScalarField::gradient(std::span<const double> x) const
{
  const int d = impl_->chart->dimension();
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) g[i] = derivative(i).evaluate(x);
  return g;
}

std::string ScalarField::to_string() const
{
  return impl_->body ? impl_->body->to_string() : std::string("<opaque>");
}

namespace {

DerivativeMode combined_mode(const ScalarField & a, const ScalarField & b)
{
  return (a.mode() == DerivativeMode::symbolic && b.mode() == DerivativeMode::symbolic)
             ? DerivativeMode::symbolic
             : DerivativeMode::finite_difference;
}

template <typename ExprOp, typename NumOp>
ScalarField combine(const ScalarField & a, const ScalarField & b, ExprOp eop, NumOp nop)
{
  require_same_chart(*a.chart(), *b.chart(), "ScalarField arithmetic");
  if (a.is_symbolic() && b.is_symbolic())
    return ScalarField(a.chart(), eop(a.expression(), b.expression())).with_mode(combined_mode(a, b));
  return ScalarField(a.chart(), [a, b, nop](std::span<const double> x) { return nop(a.evaluate(x), b.evaluate(x)); });
}

}  // namespace

ScalarField operator+(const ScalarField & a, const ScalarField & b)
{
  return combine(a, b, [](const expr::Expr & x, const expr::Expr & y) { return x + y; },
                 [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField & a, const ScalarField & b)
{
  return combine(a, b, [](const expr::Expr & x, const expr::Expr & y) { return x - y; },
                 [](double x, double y) { return x - y; });
}

ScalarField operator*(const ScalarField & a, const ScalarField & b)
{
  return combine(a, b, [](const expr::Expr & x, const expr::Expr & y) { return x * y; },
                 [](double x, double y) { return x * y; });
}

ScalarField operator/(const ScalarField & a, const ScalarField & b)
{
  return combine(a, b, [](const expr::Expr & x, const expr::Expr & y) { return x / y; },
                 [](double x, double y) { return x / y; });
}

ScalarField operator-(const ScalarField & a)
{
  if (a.is_symbolic()) return ScalarField(a.chart(), -a.expression()).with_mode(a.mode());
  return ScalarField(a.chart(), [a](std::span<const double> x) { return -a.evaluate(x); });
}

ScalarField operator*(double s, const ScalarField & a) { return ScalarField::constant(a.chart(), s) * a; }

VectorField::VectorField(ChartRef chart, std::vector<ScalarField> components)
    : chart_(std::move(chart)), components_(std::move(components))
{
  if (static_cast<int>(components_.size()) != chart_->dimension())
    throw ChartMismatch("VectorField: component count does not match chart dimension");
  for (const auto & c : components_) require_same_chart(*c.chart(), *chart_, "VectorField component");
}

VectorField VectorField::constant(ChartRef chart, const Eigen::VectorXd & components)
{
  std::vector<ScalarField> c;
  for (Eigen::Index i = 0; i < components.size(); ++i) c.push_back(ScalarField::constant(chart, components[i]));
  return {std::move(chart), std::move(c)};
}

Eigen::VectorXd VectorField::operator()(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *chart_, "VectorField evaluation");
  Eigen::VectorXd v(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) v[static_cast<Eigen::Index>(i)] = components_[i].evaluate(at.span());
  return v;
}

}  // namespace cosym
