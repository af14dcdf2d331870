#include "cosym/structures.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cosym/error.hpp"

namespace cosym {

StructureSpec::StructureSpec(std::string name, KForm theta, KForm omega, Parameters parameters)
    : name_(std::move(name)),
      theta_(std::move(theta)),
      omega_(std::move(omega)),
      dtheta_(exterior_derivative(theta_)),
      domega_(omega_.degree() + 1 <= omega_.dimension() ? exterior_derivative(omega_) : KForm(omega_.chart(), 0)),
      parameters_(std::move(parameters)),
      n_((theta_.dimension() - 1) / 2)
{
  require_same_chart(*theta_.chart(), *omega_.chart(), "StructureSpec");
  if (theta_.degree() != 1 || omega_.degree() != 2) throw Error("StructureSpec: need a one-form and a two-form");
  if (theta_.dimension() % 2 == 0 || theta_.dimension() < 3)
    throw Error("StructureSpec: chart dimension must be odd and at least 3");
}

namespace {

double top_of_power(const FormValue<double> & theta, const FormValue<double> & two_form, int n)
{
  FormValue<double> acc = theta;
  for (int i = 0; i < n; ++i) acc = wedge(acc, two_form);
  return acc.top();
}

}  // namespace

double StructureSpec::volume(const ChartPoint & at) const { return top_of_power(theta_(at), omega_(at), n_); }

double StructureSpec::contact_volume(const ChartPoint & at) const
{
  return top_of_power(theta_(at), dtheta_(at), n_);
}

namespace {

int numeric_rank(const Eigen::MatrixXd & m, double tol)
{
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto & s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s[0] : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * scale) ++r;
  return r;
}

// Expression equal to eps * x_j: linear in x_j with a variable-free slope, no other dependence.
std::optional<double> linear_slope(const expr::Expr & e, int j, int dim)
{
  for (int i = 0; i < dim; ++i)
    if (i != j && e.depends_on(i)) return std::nullopt;
  const expr::Expr slope = e.derivative(j);
  if (slope.has_variables()) return std::nullopt;
  const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
  if (e.evaluate(origin) != 0.0) return std::nullopt;
  return slope.evaluate(origin);
}

bool is_constant(const ScalarField & f, double value)
{
  return f.is_symbolic() && !f.expression().has_variables() && f.expression().evaluate({}) == value;
}

// θ = dκ + ε Σ p_i dq^i against Ω = Σ dq^i ∧ dp_i, read off the expression trees.
std::optional<double> tacs_epsilon(const StructureSpec & s)
{
  if (!s.theta().is_symbolic() || !s.omega().is_symbolic()) return std::nullopt;
  const int dim = s.dimension();
  std::vector<int> partner(static_cast<std::size_t>(dim), -1);
  for (const auto & [idx, c] : s.omega().terms()) {
    if (!is_constant(c, 1.0)) return std::nullopt;
    if (partner[static_cast<std::size_t>(idx[0])] != -1 || partner[static_cast<std::size_t>(idx[1])] != -1)
      return std::nullopt;
    partner[static_cast<std::size_t>(idx[0])] = idx[1];
    partner[static_cast<std::size_t>(idx[1])] = idx[0];
  }
  int kappa = -1;
  for (int i = 0; i < dim; ++i)
    if (partner[static_cast<std::size_t>(i)] == -1) {
      if (kappa != -1) return std::nullopt;
      kappa = i;
    }
  if (kappa == -1) return std::nullopt;
  if (!is_constant(s.theta().coefficient({kappa}), 1.0)) return std::nullopt;

  std::optional<double> eps;
  for (const auto & [idx, c] : s.omega().terms()) {
    const int q = idx[0], p = idx[1];
    if (!s.theta().coefficient({p}).is_zero()) return std::nullopt;
    auto slope = linear_slope(s.theta().coefficient({q}).expression(), p, dim);
    if (!slope || *slope == 0.0) return std::nullopt;
    if (eps && *eps != *slope) return std::nullopt;
    eps = slope;
  }
  return eps;
}

}  // namespace

StructureClass classify(const StructureSpec & s, const std::vector<ChartPoint> & probes, double tol)
{
  if (probes.empty()) throw Error("classify: empty probe set");
  bool acos = true, omega_closed = true, theta_closed = true, contact = true;
  for (const auto & at : probes) {
    const auto omega = s.omega()(at);
    const auto dtheta = s.dtheta()(at);
    if (std::abs(s.volume(at)) <= tol || numeric_rank(omega.matrix(), tol) != 2 * s.n()) acos = false;
    if (s.domega()(at).max_abs() > tol) omega_closed = false;
    if (dtheta.max_abs() > tol) theta_closed = false;
    if ((omega - dtheta).max_abs() > tol || std::abs(s.contact_volume(at)) <= tol) contact = false;
  }
  StructureClass c;
  c.acos = acos;
  c.gtacos = acos && omega_closed;
  c.cos = c.gtacos && theta_closed;
  c.contact = acos && contact;
  if (c.gtacos) {
    c.tacs_epsilon = tacs_epsilon(s);
    c.tacs = c.tacs_epsilon.has_value();
  }
  return c;
}

ChartRef darboux_chart(int n)
{
  if (n < 1) throw Error("darboux_chart: n must be positive");
  std::vector<std::string> names;
  if (n == 1) {
    names = {"q", "p", "kappa"};
  } else {
    for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
    for (int i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
    names.push_back("kappa");
  }
  return Chart::make("darboux" + std::to_string(n), std::move(names));
}

DarbouxLayout DarbouxLayout::from_chart(const Chart & chart)
{
  const int d = chart.dimension();
  if (d % 2 == 0) throw ChartMismatch("chart '" + chart.name() + "' is not odd-dimensional");
  const int n = (d - 1) / 2;
  DarbouxLayout L;
  if (n == 1 && chart.find("q") && chart.find("p")) {
    L.q = {*chart.find("q")};
    L.p = {*chart.find("p")};
  } else {
    for (int i = 1; i <= n; ++i) {
      L.q.push_back(chart.index_of("q" + std::to_string(i)));
      L.p.push_back(chart.index_of("p" + std::to_string(i)));
    }
  }
  L.kappa = chart.index_of("kappa");
  return L;
}

StructureSpec CanonicalThetaSpec::structure(const std::string & name) const
{
  if (b.size() != a.size() || a.size() < 1) throw Error("CanonicalThetaSpec: a and b need equal positive length");
  if (c == 0.0) throw DegenerateStructure("CanonicalThetaSpec: c must be nonzero");
  const int nn = n();
  auto chart = darboux_chart(nn);
  KForm theta(chart, 1), omega(chart, 2);
  for (int i = 0; i < nn; ++i) {
    theta.add({i}, ScalarField::constant(chart, a[i]));
    theta.add({nn + i}, ScalarField::constant(chart, b[i]));
    omega.add({i, nn + i}, ScalarField::constant(chart, 1.0));
  }
  theta.add({2 * nn}, ScalarField::constant(chart, c));
  return StructureSpec(name, std::move(theta), std::move(omega));
}

Eigen::MatrixXd omega_matrix(const StructureSpec & s, const ChartPoint & at) { return s.omega()(at).matrix(); }

Eigen::MatrixXd flat_matrix(const StructureSpec & s, const ChartPoint & at)
{
  const Eigen::VectorXd theta = s.theta()(at).vector();
  return omega_matrix(s, at).transpose() + theta * theta.transpose();
}

Eigen::VectorXd reeb(const StructureSpec & s, const ChartPoint & at)
{
  const int d = s.dimension();
  Eigen::MatrixXd A(d + 1, d);
  A.topRows(d) = omega_matrix(s, at).transpose();
  A.row(d) = s.theta()(at).vector().transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs[d] = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < d) throw DegenerateStructure("reeb: stacked system is rank deficient at this point");
  Eigen::VectorXd R = qr.solve(rhs);
  const double residual = (A * R - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * std::max(1.0, R.cwiseAbs().maxCoeff()))
    throw DegenerateStructure("reeb: R⌟Ω = 0, R⌟θ = 1 is inconsistent at this point");
  return R;
}

Eigen::VectorXd flat(const StructureSpec & s, const Eigen::VectorXd & X, const ChartPoint & at)
{
  if (X.size() != s.dimension()) throw ChartMismatch("flat: vector length does not match chart");
  return flat_matrix(s, at) * X;
}

Eigen::VectorXd sharp(const StructureSpec & s, const Eigen::VectorXd & alpha, const ChartPoint & at)
{
  if (alpha.size() != s.dimension()) throw ChartMismatch("sharp: covector length does not match chart");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(flat_matrix(s, at));
  if (!lu.isInvertible()) throw DegenerateStructure("sharp: flat matrix is singular at this point");
  return lu.solve(alpha);
}

}  // namespace cosym
