#include "cosym/dynamics.hpp"

#include <cmath>

#include "cosym/error.hpp"

namespace cosym {

Eigen::VectorXd HamiltonianFieldCoefficients::vector() const
{
  Eigen::VectorXd v(A.size() + B.size() + 1);
  v << A, B, C;
  return v;
}

double reeb_derivative(const StructureSpec & s, const ScalarField & H, const ChartPoint & at)
{
  return H.gradient(at).dot(reeb(s, at));
}

Eigen::VectorXd hamiltonian_field_generic(const StructureSpec & s, const ScalarField & H, const ChartPoint & at)
{
  require_same_chart(*H.chart(), *s.chart(), "hamiltonian_field_generic");
  const Eigen::VectorXd dH = H.gradient(at);
  const Eigen::VectorXd theta = s.theta()(at).vector();
  const double RH = dH.dot(reeb(s, at));
  return sharp(s, dH - (RH + H(at)) * theta, at);
}

HamiltonianFieldCoefficients hamiltonian_field_closed(const CanonicalThetaSpec & spec, const ScalarField & H,
                                                      const ChartPoint & at)
{
  if (spec.c == 0.0) throw DegenerateStructure("hamiltonian_field_closed: c = 0");
  require_same_chart(*H.chart(), *at.chart(), "hamiltonian_field_closed");
  const DarbouxLayout L = DarbouxLayout::from_chart(*H.chart());
  const int n = spec.n();
  if (L.n() != n) throw ChartMismatch("hamiltonian_field_closed: θ-spec dimension does not match the chart");
  const Eigen::VectorXd dH = H.gradient(at);
  Eigen::VectorXd Hq(n), Hp(n);
  for (int i = 0; i < n; ++i) {
    Hq[i] = dH[L.q[static_cast<std::size_t>(i)]];
    Hp[i] = dH[L.p[static_cast<std::size_t>(i)]];
  }
  const double RH = dH[L.kappa] / spec.c;
  HamiltonianFieldCoefficients X;
  X.A = Hp - RH * spec.b;
  X.B = -Hq + RH * spec.a;
  X.C = (-spec.a.dot(Hp) + spec.b.dot(Hq) - H(at)) / spec.c;
  return X;
}

Eigen::VectorXd gradient_field(const StructureSpec & s, const ScalarField & H, const ChartPoint & at)
{
  require_same_chart(*H.chart(), *s.chart(), "gradient_field");
  return sharp(s, H.gradient(at), at);
}

Eigen::VectorXd evolution_field(const StructureSpec & s, const ScalarField & H, const ChartPoint & at, double tol)
{
  if (s.dtheta()(at).max_abs() > tol || s.domega()(at).max_abs() > tol)
    throw DegenerateStructure("evolution_field: structure '" + s.name() + "' is not cosymplectic at this point");
  const Eigen::VectorXd R = reeb(s, at);
  const Eigen::VectorXd grad = gradient_field(s, H, at);
  const double RH = H.gradient(at).dot(R);
  return grad - RH * R + R;
}

double poisson_bracket(const ScalarField & f, const ScalarField & g, const ChartPoint & at)
{
  require_same_chart(*f.chart(), *g.chart(), "poisson_bracket");
  const DarbouxLayout L = DarbouxLayout::from_chart(*f.chart());
  const Eigen::VectorXd df = f.gradient(at), dg = g.gradient(at);
  double sum = 0.0;
  for (int i = 0; i < L.n(); ++i) {
    const int q = L.q[static_cast<std::size_t>(i)], p = L.p[static_cast<std::size_t>(i)];
    sum += df[q] * dg[p] - df[p] * dg[q];
  }
  return sum;
}

ScalarField euler_operator(const ScalarField & f)
{
  const DarbouxLayout L = DarbouxLayout::from_chart(*f.chart());
  ScalarField out = f;
  for (int p : L.p) out = out - ScalarField::coordinate(f.chart(), p) * f.derivative(p);
  return out;
}

double jacobi_bracket(const ScalarField & f, const ScalarField & g, const ChartPoint & at)
{
  const DarbouxLayout L = DarbouxLayout::from_chart(*f.chart());
  return poisson_bracket(f, g, at) + euler_operator(f)(at) * g.derivative(L.kappa)(at) -
         euler_operator(g)(at) * f.derivative(L.kappa)(at);
}

ScalarField jacobi_bracket(const ScalarField & f, const ScalarField & g)
{
  require_same_chart(*f.chart(), *g.chart(), "jacobi_bracket");
  const DarbouxLayout L = DarbouxLayout::from_chart(*f.chart());
  ScalarField out = euler_operator(f) * g.derivative(L.kappa) - euler_operator(g) * f.derivative(L.kappa);
  for (int i = 0; i < L.n(); ++i) {
    const int q = L.q[static_cast<std::size_t>(i)], p = L.p[static_cast<std::size_t>(i)];
    out = out + f.derivative(q) * g.derivative(p) - f.derivative(p) * g.derivative(q);
  }
  return out;
}

double jacobi_bracket_sharp(const StructureSpec & s, const ScalarField & f, const ScalarField & g,
                            const ChartPoint & at)
{
  const Eigen::VectorXd df = f.gradient(at), dg = g.gradient(at);
  const Eigen::VectorXd R = reeb(s, at);
  const Eigen::MatrixXd deta = s.dtheta()(at).matrix();
  const Eigen::VectorXd sf = sharp(s, df, at), sg = sharp(s, dg, at);
  return -sf.dot(deta * sg) - dg.dot(R) * f(at) + g(at) * df.dot(R);
}

std::vector<CoordinateFieldComparison> compare_tacs_coordinate_fields(int n, double epsilon, const ChartPoint & at)
{
  const ChartRef chart = darboux_chart(n);
  require_same_chart(*at.chart(), *chart, "compare_tacs_coordinate_fields");

  // θ = dκ + ε p_i dq^i, Ω = Σ dq^i ∧ dp_i
  KForm theta(chart, 1), omega(chart, 2);
  for (int i = 0; i < n; ++i) {
    theta.add({i}, ScalarField::constant(chart, epsilon) * ScalarField::coordinate(chart, n + i));
    omega.add({i, n + i}, ScalarField::constant(chart, 1.0));
  }
  theta.add({2 * n}, ScalarField::constant(chart, 1.0));
  const StructureSpec s("tacs", theta, omega);

  const int dim = 2 * n + 1;
  std::vector<CoordinateFieldComparison> out;
  auto record = [&](std::string name, const ScalarField & f, Eigen::VectorXd old) {
    CoordinateFieldComparison c;
    c.field = std::move(name);
    c.corrected = hamiltonian_field_generic(s, f, at);
    c.uncorrected = std::move(old);
    c.discrepancy = (c.corrected - c.uncorrected).cwiseAbs().maxCoeff();
    out.push_back(std::move(c));
  };
  const std::vector<std::string> & names = chart->coordinates();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd old = Eigen::VectorXd::Zero(dim);
    old[n + i] = -1.0;
    old[2 * n] = epsilon * at[i];
    record("X_" + names[static_cast<std::size_t>(i)], ScalarField::coordinate(chart, i), old);
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd old = Eigen::VectorXd::Zero(dim);
    old[i] = 1.0;
    record("X_" + names[static_cast<std::size_t>(n + i)], ScalarField::coordinate(chart, n + i), old);
  }
  Eigen::VectorXd old = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < n; ++i) old[n + i] = epsilon * at[n + i];
  old[2 * n] = epsilon * at[2 * n];
  record("X_kappa", ScalarField::coordinate(chart, 2 * n), old);
  return out;
}

}  // namespace cosym
