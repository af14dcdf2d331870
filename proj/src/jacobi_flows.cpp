#include "cosym/jacobi_flows.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "cosym/error.hpp"

namespace cosym {

Parameters LinearHamiltonianCoefficients::table(const ModelParameters & model) const
{
  Parameters t = model.table();
  t["a"] = a;
  t["b"] = b;
  t["c_lin"] = c_lin;
  t["m"] = m;
  t["n_lin"] = n_lin;
  return t;
}

LinearHamiltonianCoefficients LinearHamiltonianCoefficients::reference()
{
  return {0.3, -0.2, 0.4, 0.25, 0.1, "kappa^2/2"};
}

SplitEnergy split_energy(const LinearHamiltonianCoefficients & c, const ModelParameters & m, const ChartRef & chart)
{
  for (const char * name : {"x", "y", "q", "p"})
    if (!chart->find(name)) throw ChartMismatch(std::string("split_energy: chart lacks coordinate ") + name);
  const auto sym = chart->symbols(c.table(m));
  auto field = [&](std::string_view text) { return ScalarField(chart, expr::parse(text, sym)); };

  SplitEnergy e{field("nu*((m + c_lin)*q^2 + (c_lin - m)*p^2 + 2*n_lin*q*p + 2*(a*q + b*p))"),
                field("k*((1/y)*((m + c_lin)*(x^2 + y^2) - 2*(n_lin*x + c_lin*y)) + 3*c_lin - m)"),
                ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 0.0)};

  const auto kappa = chart->find("kappa");
  if (kappa) {
    e.h_kappa = field(c.h_kappa);
    const auto & h = e.h_kappa.expression();
    for (int i = 0; i < chart->dimension(); ++i)
      if (i != *kappa && h.depends_on(i)) throw Error("split_energy: h_kappa may depend on kappa only");
  } else {
    const auto line = Chart::make("kappa_line", {"kappa"});
    if (!expr::parse(c.h_kappa, line->symbols(c.table(m))).is_number(0.0))
      throw ChartMismatch("split_energy: nonzero h_kappa on a chart without kappa");
  }
  e.total = e.H_pq + e.H_xy + e.h_kappa;
  return e;
}

double energy(const LinearHamiltonianCoefficients & c, const ModelParameters & m, const ChartPoint & at)
{
  const ChartRef & chart = at.chart();
  if (!chart->find("y") || !(at["y"] > 0.0)) throw DomainError("energy: y must be positive");
  LinearHamiltonianCoefficients no_h = c;
  no_h.h_kappa = "0";
  const SplitEnergy e = split_energy(no_h, m, chart);
  return e.H_pq(at) + e.H_xy(at);
}

std::string_view to_string(FlowVariant v)
{
  switch (v) {
    case FlowVariant::base_xj1: return "base_xj1";
    case FlowVariant::gtacos: return "gtacos";
    case FlowVariant::contact: return "contact";
  }
  return "?";
}

FlowVariant parse_variant(std::string_view name)
{
  for (FlowVariant v : {FlowVariant::base_xj1, FlowVariant::gtacos, FlowVariant::contact})
    if (to_string(v) == name) return v;
  throw Error("unknown variant '" + std::string(name) + "' (expected base_xj1, gtacos or contact)");
}

ChartRef variant_chart(FlowVariant v)
{
  return v == FlowVariant::base_xj1 ? siegel_jacobi_chart() : extended_siegel_jacobi_chart();
}

Eigen::VectorXd symplectic_field(const ScalarField & H, const ModelParameters & m, const ChartPoint & at)
{
  require_same_chart(*at.chart(), *siegel_jacobi_chart(), "symplectic_field");
  require_same_chart(*H.chart(), *siegel_jacobi_chart(), "symplectic_field");
  const double y = at["y"];
  if (!(y > 0.0)) throw DomainError("symplectic_field: y must be positive");
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M(0, 1) = m.k / (y * y);
  M(1, 0) = -M(0, 1);
  M(2, 3) = 2.0 * m.nu;
  M(3, 2) = -M(2, 3);
  return M.transpose().fullPivLu().solve(H.gradient(at));
}

Eigen::VectorXd eom(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                    const ChartPoint & at)
{
  require_same_chart(*at.chart(), *variant_chart(v), "eom");
  if (!(at["y"] > 0.0)) throw DomainError("eom: y must be positive");
  const SplitEnergy e = split_energy(c, m, at.chart());
  switch (v) {
    case FlowVariant::base_xj1: return symplectic_field(e.total, m, at);
    case FlowVariant::gtacos: return hamiltonian_field_generic(xjt_gtacos(m), e.total, at);
    case FlowVariant::contact: return hamiltonian_field_generic(xjt_contact(m), e.total, at);
  }
  throw Error("eom: unknown variant");
}

Eigen::Vector2d riccati_rhs(const LinearHamiltonianCoefficients & c, double x, double y)
{
  if (!(y > 0.0)) throw DomainError("riccati_rhs: y must be positive");
  const double mc = c.m + c.c_lin;
  return {mc * (y * y - x * x) + 2.0 * c.n_lin * x, 2.0 * y * (c.n_lin - mc * x)};
}

Eigen::Vector2d riccati_rhs_printed(const LinearHamiltonianCoefficients & c, double x, double y)
{
  if (!(y > 0.0)) throw DomainError("riccati_rhs_printed: y must be positive");
  const double mc = c.m + c.c_lin;
  return {mc * (-x * x + y * y) + c.m * x - c.c_lin + c.m, -2.0 * mc * y * y + 2.0 * c.n_lin * y};
}

RedGreen red_green_decomposition(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                                 const ChartPoint & at)
{
  if (v == FlowVariant::base_xj1) throw Error("red_green_decomposition: variant must be gtacos or contact");
  const Eigen::VectorXd full = eom(c, v, m, at);
  LinearHamiltonianCoefficients base_c = c;
  base_c.h_kappa = "0";
  const ChartPoint base_pt(siegel_jacobi_chart(), {at[0], at[1], at[2], at[3]});
  RedGreen rg;
  rg.base = Eigen::VectorXd::Zero(5);
  rg.base.head<4>() = eom(base_c, FlowVariant::base_xj1, m, base_pt);
  rg.correction = full - rg.base;
  return rg;
}

double poisson_bracket_xj1(const ScalarField & f, const ScalarField & g, const ModelParameters & m,
                           const ChartPoint & at)
{
  const Eigen::VectorXd Xf = symplectic_field(f, m, at), Xg = symplectic_field(g, m, at);
  const double y = at["y"];
  const double tau = m.k / (y * y), sigma = 2.0 * m.nu;
  return tau * (Xf[0] * Xg[1] - Xf[1] * Xg[0]) + sigma * (Xf[2] * Xg[3] - Xf[3] * Xg[2]);
}

double poisson_bracket_xj1_printed(const ScalarField & f, const ScalarField & g, const ModelParameters & m,
                                   const ChartPoint & at)
{
  const Eigen::VectorXd df = f.gradient(at), dg = g.gradient(at);
  const double y = at["y"];
  const double fx = df[0], fy = df[1], fq = df[2], fp = df[3];
  const double gx = dg[0], gy = dg[1], gq = dg[2], gp = dg[3];
  return (1.0 / m.k) * ((y * y + 1.0) / (y * y)) * (fx * gy - gx * fy) +
         (1.0 / (2.0 * m.nu)) * (fq * gp - gq * fp + (fq * gy - gq * fy) / (y * y));
}

double euler_operator_xjt(const ScalarField & f, const ModelParameters & m, const ChartPoint & at)
{
  const ChartMap phi = darboux_identification(m);
  const Eigen::MatrixXd J = phi.jacobian(at);
  const Eigen::VectorXd grad = J.transpose().fullPivLu().solve(f.gradient(at));
  const ChartPoint d = phi.apply(at);
  const DarbouxLayout L = DarbouxLayout::from_chart(*d.chart());
  double out = f(at);
  for (int p : L.p) out -= d[p] * grad[p];
  return out;
}

double euler_operator_xjt_printed(const ScalarField & f, const ChartPoint & at)
{
  const Eigen::VectorXd df = f.gradient(at);
  const double y = at["y"], p = at["p"];
  return f(at) + df[1] / (y * y * y) - p * df[3];
}

namespace {

PrintedDiscrepancy entry(std::string name, std::vector<std::string> comps, Eigen::VectorXd printed,
                         Eigen::VectorXd derived)
{
  PrintedDiscrepancy d{std::move(name), std::move(comps), std::move(printed), std::move(derived), 0.0};
  d.max_abs_deviation = (d.printed - d.derived).cwiseAbs().maxCoeff();
  return d;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

std::vector<PrintedDiscrepancy> paper_verbatim_report(const LinearHamiltonianCoefficients & c,
                                                      const ModelParameters & m, const ChartPoint & at)
{
  require_same_chart(*at.chart(), *extended_siegel_jacobi_chart(), "paper_verbatim_report");
  const double x = at[0], y = at[1], q = at[2], p = at[3];
  const SplitEnergy e = split_energy(c, m, at.chart());
  const Eigen::VectorXd dH = e.total.gradient(at);
  const double H = e.total(at);
  const double hp = dH[4], h = e.h_kappa(at);
  const double nu = m.nu, sd = std::sqrt(m.delta);
  const double a = c.a, b = c.b, cl = c.c_lin, mm = c.m, n = c.n_lin;

  std::vector<PrintedDiscrepancy> out;
  out.push_back(entry("riccati_xy", {"x", "y"}, riccati_rhs_printed(c, x, y), riccati_rhs(c, x, y)));

  const Eigen::VectorXd gt = eom(c, FlowVariant::gtacos, m, at);
  Eigen::VectorXd pq_printed(2);
  pq_printed << -(mm + cl) * q - n * p - a - q / (2.0 * nu) * hp, q * n + (cl - mm) * p + b - p / (2.0 * nu) * hp;
  out.push_back(entry("pq_block", {"q", "p"}, pq_printed, gt.segment<2>(2)));

  const double kappa_printed =
      (cl + mm) * q * a * a + (-cl + mm) * p * p + (mm - n) * p * q + n * q + b * p - h / sd;
  out.push_back(entry("kappa_rate", {"kappa"}, scalar(kappa_printed), scalar(gt[4])));

  const Eigen::VectorXd ct = eom(c, FlowVariant::contact, m, at);
  const double Hx = dH[0], Hy = dH[1], Hq = dH[2], Hp = dH[3];
  Eigen::VectorXd contact_printed(5);
  contact_printed << y * y / m.k * Hy, -y * y / m.k * Hx + y * hp, Hp / (2.0 * nu), -(Hq / (2.0 * nu) + p * hp),
      (-y * Hy + p * Hp - H) * hp;
  out.push_back(entry("contact_field", {"x", "y", "q", "p", "kappa"}, contact_printed, ct));
  out.push_back(entry("contact_kappa_rate", {"kappa"}, scalar(contact_printed[4]), scalar(ct[4])));

  const ChartRef xj1 = siegel_jacobi_chart();
  const ChartPoint base(xj1, {x, y, q, p});
  const ScalarField f = ScalarField::parse(xj1, "x*q + y*p"), g = ScalarField::parse(xj1, "x^2 + q*p");
  out.push_back(entry("poisson_bracket_xj1", {"{f,g}"}, scalar(poisson_bracket_xj1_printed(f, g, m, base)),
                      scalar(poisson_bracket_xj1(f, g, m, base))));

  const ScalarField fe = ScalarField::parse(at.chart(), "y^2*p + x");
  out.push_back(entry("euler_operator", {"f_e"}, scalar(euler_operator_xjt_printed(fe, at)),
                      scalar(euler_operator_xjt(fe, m, at))));
  return out;
}

Trajectory integrate_variant(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                             const ChartPoint & x0, double t_end, double dt, const IntegrationOptions & options)
{
  require_same_chart(*x0.chart(), *variant_chart(v), "integrate_variant");
  LinearHamiltonianCoefficients cc = c;
  if (v == FlowVariant::base_xj1) cc.h_kappa = "0";
  const SplitEnergy e = split_energy(cc, m, x0.chart());
  if (v == FlowVariant::base_xj1) {
    auto velocity = [&](const ChartPoint & p) { return symplectic_field(e.total, m, p); };
    return integrate_field(velocity, e.total, {}, x0, t_end, dt, options);
  }
  return integrate(v == FlowVariant::gtacos ? xjt_gtacos(m) : xjt_contact(m), e.total, x0, t_end, dt, options);
}

Trajectory integrate_riccati(const LinearHamiltonianCoefficients & c, const ModelParameters & m, double x0, double y0,
                             double t_end, double dt, const IntegrationOptions & options)
{
  const ChartRef chart = metric_chart(1);
  const auto sym = chart->symbols(c.table(m));
  const ScalarField Hxy(chart, expr::parse("k*((1/y)*((m + c_lin)*(x^2 + y^2) - 2*(n_lin*x + c_lin*y)) + 3*c_lin - m)", sym));
  auto velocity = [&](const ChartPoint & p) -> Eigen::VectorXd { return riccati_rhs(c, p[0], p[1]); };
  return integrate_field(velocity, Hxy, {}, ChartPoint(chart, {x0, y0}), t_end, dt, options);
}

}  // namespace cosym
