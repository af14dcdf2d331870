#include "cosym/forms.hpp"

#include <numeric>

#include "cosym/error.hpp"

namespace cosym {

int normalize(MultiIndex & idx)
{
  int sign = 1;
  // insertion sort counting transpositions; k <= 7
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

std::vector<MultiIndex> increasing_indices(int n, int k)
{
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  MultiIndex idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

KForm::KForm(ChartRef chart, int degree) : chart_(std::move(chart)), degree_(degree)
{
  if (degree < 0 || degree > chart_->dimension())
    throw Error("KForm: degree " + std::to_string(degree) + " exceeds chart dimension");
}

KForm KForm::function(const ScalarField & f)
{
  KForm out(f.chart(), 0);
  out.add({}, f);
  return out;
}

KForm KForm::differential(const ScalarField & f) { return exterior_derivative(function(f)); }

KForm & KForm::add(MultiIndex idx, const ScalarField & coefficient)
{
  if (static_cast<int>(idx.size()) != degree_) throw Error("KForm::add: index length does not match degree");
  require_same_chart(*coefficient.chart(), *chart_, "KForm coefficient");
  const int s = normalize(idx);
  if (s == 0 || coefficient.is_zero()) return *this;
  if (!idx.empty() && (idx.front() < 0 || idx.back() >= chart_->dimension()))
    throw Error("KForm::add: index out of range");
  const ScalarField c = s > 0 ? coefficient : -coefficient;
  auto it = terms_.find(idx);
  if (it == terms_.end()) {
    terms_.emplace(std::move(idx), c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

KForm & KForm::add(MultiIndex idx, std::string_view coefficient, const Parameters & parameters)
{
  return add(std::move(idx), ScalarField::parse(chart_, coefficient, parameters));
}

ScalarField KForm::coefficient(MultiIndex idx) const
{
  const int s = normalize(idx);
  if (s != 0) {
    auto it = terms_.find(idx);
    if (it != terms_.end()) return s > 0 ? it->second : -it->second;
  }
  return ScalarField::constant(chart_, 0.0);
}

bool KForm::is_symbolic() const
{
  return std::all_of(terms_.begin(), terms_.end(), [](const auto & t) { return t.second.is_symbolic(); });
}

FormValue<double> KForm::operator()(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *chart_, "KForm evaluation");
  return evaluate(at.span());
}

FormValue<double> KForm::evaluate(std::span<const double> x) const
{
  FormValue<double> v(chart_->dimension(), degree_);
  for (const auto & [idx, c] : terms_) v.add(idx, c.evaluate(x));
  return v;
}

KForm operator+(const KForm & a, const KForm & b)
{
  require_same_chart(*a.chart(), *b.chart(), "KForm sum");
  if (a.degree() != b.degree()) throw Error("KForm sum: degree mismatch");
  KForm out = a;
  for (const auto & [idx, c] : b.terms()) out.add(idx, c);
  return out;
}

KForm operator-(const KForm & a, const KForm & b)
{
  require_same_chart(*a.chart(), *b.chart(), "KForm difference");
  if (a.degree() != b.degree()) throw Error("KForm difference: degree mismatch");
  KForm out = a;
  for (const auto & [idx, c] : b.terms()) out.add(idx, -c);
  return out;
}

KForm operator*(const ScalarField & f, const KForm & a)
{
  require_same_chart(*a.chart(), *f.chart(), "KForm scaling");
  KForm out(a.chart(), a.degree());
  if (f.is_zero()) return out;
  for (const auto & [idx, c] : a.terms()) out.add(idx, f * c);
  return out;
}

KForm wedge(const KForm & a, const KForm & b)
{
  require_same_chart(*a.chart(), *b.chart(), "wedge");
  if (a.degree() + b.degree() > a.dimension()) throw Error("wedge: degree overflow");
  KForm out(a.chart(), a.degree() + b.degree());
  for (const auto & [i, x] : a.terms())
    for (const auto & [j, y] : b.terms()) {
      MultiIndex k = i;
      k.insert(k.end(), j.begin(), j.end());
      MultiIndex probe = k;
      if (normalize(probe) != 0) out.add(std::move(k), x * y);
    }
  return out;
}

KForm exterior_derivative(const KForm & f)
{
  if (f.degree() >= f.dimension()) throw Error("exterior_derivative: degree equals chart dimension");
  KForm out(f.chart(), f.degree() + 1);
  for (const auto & [idx, c] : f.terms())
    for (int j = 0; j < f.dimension(); ++j) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      if (c.is_symbolic() && c.mode() == DerivativeMode::symbolic && !c.expression().depends_on(j)) continue;
      MultiIndex k{j};
      k.insert(k.end(), idx.begin(), idx.end());
      out.add(std::move(k), c.derivative(j));
    }
  return out;
}

FormValue<double> interior_product(const VectorField & X, const KForm & f, const ChartPoint & at)
{
  require_same_chart(*X.chart(), *f.chart(), "interior_product");
  return interior_product<double>(X(at), f(at));
}

KForm interior_product(const VectorField & X, const KForm & f)
{
  require_same_chart(*X.chart(), *f.chart(), "interior_product");
  if (f.degree() < 1) throw Error("interior_product: degree 0 form");
  KForm out(f.chart(), f.degree() - 1);
  for (const auto & [idx, c] : f.terms())
    for (std::size_t m = 0; m < idx.size(); ++m) {
      MultiIndex rest;
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (r != m) rest.push_back(idx[r]);
      ScalarField term = X.components()[static_cast<std::size_t>(idx[m])] * c;
      out.add(std::move(rest), m % 2 == 0 ? term : -term);
    }
  return out;
}

ChartMap::ChartMap(ChartRef source, ChartRef target, std::vector<ScalarField> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components))
{
  if (static_cast<int>(components_.size()) != target_->dimension())
    throw ChartMismatch("ChartMap: need one component per target coordinate");
  for (const auto & c : components_) require_same_chart(*c.chart(), *source_, "ChartMap component");
}

ChartMap ChartMap::identity(const ChartRef & chart)
{
  std::vector<ScalarField> c;
  for (int i = 0; i < chart->dimension(); ++i) c.push_back(ScalarField::coordinate(chart, i));
  return {chart, chart, std::move(c)};
}

bool ChartMap::is_symbolic() const
{
  return std::all_of(components_.begin(), components_.end(), [](const ScalarField & c) { return c.is_symbolic(); });
}

ChartPoint ChartMap::apply(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *source_, "ChartMap::apply");
  Eigen::VectorXd y(target_->dimension());
  for (int k = 0; k < target_->dimension(); ++k) y[k] = components_[static_cast<std::size_t>(k)].evaluate(at.span());
  return ChartPoint(target_, std::move(y));
}

Eigen::MatrixXd ChartMap::jacobian(const ChartPoint & at) const
{
  require_same_chart(*at.chart(), *source_, "ChartMap::jacobian");
  Eigen::MatrixXd J(target_->dimension(), source_->dimension());
  for (int k = 0; k < target_->dimension(); ++k)
    J.row(k) = components_[static_cast<std::size_t>(k)].gradient(at.span()).transpose();
  return J;
}

FormValue<double> pullback(const ChartMap & m, const KForm & f, const ChartPoint & at)
{
  require_same_chart(*f.chart(), *m.target(), "pullback");
  const ChartPoint image = m.apply(at);
  const Eigen::MatrixXd J = m.jacobian(at);
  const FormValue<double> fv = f(image);
  const int k = f.degree();
  FormValue<double> out(m.source()->dimension(), k);
  if (k == 0) {
    for (const auto & [idx, val] : fv.components()) out.add(idx, val);
    return out;
  }
  Eigen::MatrixXd minor(k, k);
  for (const MultiIndex & I : increasing_indices(m.source()->dimension(), k)) {
    double sum = 0.0;
    for (const auto & [K, val] : fv.components()) {
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) minor(r, c) = J(K[static_cast<std::size_t>(r)], I[static_cast<std::size_t>(c)]);
      sum += val * minor.determinant();
    }
    out.add(I, sum);
  }
  return out;
}

namespace {

// Leibniz expansion; k is small.
expr::Expr symbolic_det(const std::vector<std::vector<expr::Expr>> & a)
{
  const std::size_t k = a.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  expr::Expr sum(0.0);
  do {
    MultiIndex p(perm.begin(), perm.end());
    const int s = normalize(p);
    expr::Expr term(1.0);
    for (std::size_t r = 0; r < k; ++r) term = term * a[r][perm[r]];
    sum = s > 0 ? sum + term : sum - term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

}  // namespace

KForm pullback(const ChartMap & m, const KForm & f)
{
  require_same_chart(*f.chart(), *m.target(), "pullback");
  const ChartRef & src = m.source();
  const int k = f.degree();
  KForm out(src, k);
  const bool symbolic = m.is_symbolic() && f.is_symbolic() &&
                        std::all_of(m.components().begin(), m.components().end(),
                                    [](const ScalarField & c) { return c.mode() == DerivativeMode::symbolic; });
  if (symbolic) {
    std::vector<expr::Expr> repl;
    for (const auto & c : m.components()) repl.push_back(c.expression());
    std::vector<std::vector<expr::Expr>> J(m.components().size());
    for (std::size_t t = 0; t < J.size(); ++t)
      for (int j = 0; j < src->dimension(); ++j) J[t].push_back(m.components()[t].expression().derivative(j));
    for (const MultiIndex & I : increasing_indices(src->dimension(), k)) {
      expr::Expr sum(0.0);
      for (const auto & [K, c] : f.terms()) {
        std::vector<std::vector<expr::Expr>> minor(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r)
          for (int cc = 0; cc < k; ++cc)
            minor[static_cast<std::size_t>(r)].push_back(
                J[static_cast<std::size_t>(K[static_cast<std::size_t>(r)])][static_cast<std::size_t>(I[static_cast<std::size_t>(cc)])]);
        sum = sum + c.expression().substitute(repl) * (k == 0 ? expr::Expr(1.0) : symbolic_det(minor));
      }
      out.add(I, ScalarField(src, sum));
    }
    return out;
  }
  for (const MultiIndex & I : increasing_indices(src->dimension(), k)) {
    out.add(I, ScalarField(src, [m, f, I, src](std::span<const double> x) {
              ChartPoint p(src, Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
              return pullback(m, f, p)[I];
            }));
  }
  return out;
}

}  // namespace cosym
