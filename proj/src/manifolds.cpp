#include "cosym/manifolds.hpp"

#include <charconv>
#include <cmath>
#include <complex>

#include "cosym/error.hpp"

namespace cosym {

ModelParameters ModelParameters::from_kn(double k, double nu, double delta, Parameterization p, double beta)
{
  ModelParameters m;
  m.k = k;
  m.nu = nu;
  m.delta = delta;
  m.beta = beta;
  if (p == Parameterization::balanced) {
    m.alpha = k / 2.0;
    m.gamma = nu;
  } else {
    m.alpha = std::sqrt(k) / 2.0;
    m.gamma = std::sqrt(nu);
  }
  m.validate();
  return m;
}

void ModelParameters::validate() const
{
  if (!(k > 0.0) || !(nu > 0.0) || !(delta > 0.0)) throw Error("model parameters: k, nu, delta must be positive");
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0))
    throw Error("model parameters: alpha, beta, gamma must be nonnegative");
}

Parameters ModelParameters::table() const { return {{"k", k}, {"nu", nu}, {"delta", delta}}; }

namespace {

std::vector<DomainGuard> upper_half_plane() { return {{"y", GuardOp::greater, 0.0}}; }

}  // namespace

ChartRef extended_siegel_jacobi_chart()
{
  static const ChartRef c = Chart::make("xjt", {"x", "y", "q", "p", "kappa"}, upper_half_plane());
  return c;
}

ChartRef siegel_jacobi_chart()
{
  static const ChartRef c = Chart::make("xj1", {"x", "y", "q", "p"}, upper_half_plane());
  return c;
}

ChartRef heisenberg_chart()
{
  static const ChartRef c = Chart::make("heisenberg", {"x", "y", "kappa"});
  return c;
}

ChartRef group_chart()
{
  static const ChartRef c = Chart::make("jacobi_group", {"x", "y", "theta_ang", "p", "q", "kappa"}, upper_half_plane());
  return c;
}

ChartRef metric_chart(int metric_case)
{
  static const ChartRef c1 = Chart::make("siegel_half_plane", {"x", "y"}, upper_half_plane());
  static const ChartRef c2 = Chart::make("sl2r", {"x", "y", "theta_ang"}, upper_half_plane());
  static const ChartRef c3 = Chart::make("xj1_metric", {"x", "y", "p", "q"}, upper_half_plane());
  static const ChartRef c4 = Chart::make("xjt_metric", {"x", "y", "p", "q", "kappa"}, upper_half_plane());
  switch (metric_case) {
    case 1: return c1;
    case 2: return c2;
    case 3: return c3;
    case 4: return c4;
    case 5: return group_chart();
    default: throw Error("metric case must be 1..5");
  }
}

ChartRef siegel_jacobi_disk_chart()
{
  static const ChartRef c = Chart::make(
      "xj1_disk", {"w1", "w2", "z1", "z2"}, {},
      {PredicateGuard{"|w| < 1", [](std::span<const double> v) { return v[0] * v[0] + v[1] * v[1] < 1.0; }}});
  return c;
}

StructureSpec darboux_contact(int n)
{
  const ChartRef chart = darboux_chart(n);
  KForm theta(chart, 1), omega(chart, 2);
  for (int i = 0; i < n; ++i) {
    theta.add({i}, -ScalarField::coordinate(chart, n + i));
    omega.add({i, n + i}, ScalarField::constant(chart, 1.0));
  }
  theta.add({2 * n}, ScalarField::constant(chart, 1.0));
  return StructureSpec("darboux_contact(" + std::to_string(n) + ")", theta, omega);
}

StructureSpec darboux_cosymplectic(int n)
{
  const ChartRef chart = darboux_chart(n);
  KForm theta(chart, 1), omega(chart, 2);
  for (int i = 0; i < n; ++i) omega.add({i, n + i}, ScalarField::constant(chart, 1.0));
  theta.add({2 * n}, ScalarField::constant(chart, 1.0));
  return StructureSpec("darboux_cosymplectic(" + std::to_string(n) + ")", theta, omega);
}

StructureSpec heisenberg()
{
  const ChartRef chart = heisenberg_chart();
  KForm theta(chart, 1), omega(chart, 2);
  theta.add({0}, "-y");
  theta.add({2}, "1");
  omega.add({0, 1}, "1");
  return StructureSpec("heisenberg", theta, omega);
}

namespace {

// ω = (k/y²) dx∧dy + 2ν dq∧dp on (x, y, q, p, κ)
KForm xjt_omega(const ModelParameters & m)
{
  const ChartRef chart = extended_siegel_jacobi_chart();
  const Parameters par = m.table();
  KForm omega(chart, 2);
  omega.add({0, 1}, "k/y^2", par);
  omega.add({2, 3}, "2*nu", par);
  return omega;
}

}  // namespace

StructureSpec xjt_gtacos(const ModelParameters & m)
{
  m.validate();
  const ChartRef chart = extended_siegel_jacobi_chart();
  const Parameters par = m.table();
  KForm theta(chart, 1);
  theta.add({2}, "-sqrt(delta)*p", par);
  theta.add({3}, "sqrt(delta)*q", par);
  theta.add({4}, "sqrt(delta)", par);
  return StructureSpec("xjt_gtacos", theta, xjt_omega(m), par);
}

StructureSpec xjt_contact(const ModelParameters & m)
{
  m.validate();
  const ChartRef chart = extended_siegel_jacobi_chart();
  const Parameters par = m.table();
  KForm eta(chart, 1);
  eta.add({0}, "k/y", par);
  eta.add({2}, "-nu*p", par);
  eta.add({3}, "nu*q", par);
  eta.add({4}, "sqrt(delta)", par);
  return StructureSpec("xjt_contact", eta, xjt_omega(m), par);
}

StructureSpec builtin(std::string_view name, const ModelParameters & m)
{
  std::string_view base = name;
  int n = 1;
  if (auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') throw Error("builtin: malformed name '" + std::string(name) + "'");
    base = name.substr(0, open);
    std::string_view arg = name.substr(open + 1, name.size() - open - 2);
    auto res = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (res.ec != std::errc() || res.ptr != arg.data() + arg.size() || n < 1)
      throw Error("builtin: bad dimension argument in '" + std::string(name) + "'");
  }
  if (base == "darboux_contact") return darboux_contact(n);
  if (base == "darboux_cosymplectic") return darboux_cosymplectic(n);
  if (base == "heisenberg") return heisenberg();
  if (base == "xjt_gtacos") return xjt_gtacos(m);
  if (base == "xjt_contact") return xjt_contact(m);
  std::string known;
  for (const auto & e : builtin_catalog()) known += (known.empty() ? "" : ", ") + e.name;
  throw Error("unknown structure '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<CatalogEntry> builtin_catalog()
{
  return {
      {"darboux_contact(n)", "theta = dkappa - p_i dq^i, Omega = dq^i ^ dp_i on (q_i, p_i, kappa)"},
      {"darboux_cosymplectic(n)", "theta = dkappa, Omega = dq^i ^ dp_i on (q_i, p_i, kappa)"},
      {"heisenberg", "eta = dkappa - y dx, Omega = dx ^ dy on (x, y, kappa)"},
      {"xjt_gtacos", "theta = sqrt(delta)(dkappa - p dq + q dp), omega = (k/y^2) dx^dy + 2 nu dq^dp"},
      {"xjt_contact", "eta0 = sqrt(delta) dkappa + (k/y) dx + nu(-p dq + q dp), Omega = d eta0"},
  };
}

namespace {

// Full 6x6 metric in group order (x, y, theta_ang, p, q, kappa).
Eigen::Matrix<double, 6, 6> group_metric(const ModelParameters & m, double x, double y, double p, double q)
{
  const double S = x * x + y * y;
  const double a = m.alpha, b = m.beta, g = m.gamma, d = m.delta;
  Eigen::Matrix<double, 6, 6> G = Eigen::Matrix<double, 6, 6>::Zero();
  enum { X, Y, T, P, Q, K };
  G(X, X) = a / (y * y) + b / (y * y);
  G(Y, Y) = a / (y * y);
  G(X, T) = G(T, X) = 2.0 * b / y;
  G(T, T) = 4.0 * b;
  G(P, P) = g * S / y + d * q * q;
  G(Q, Q) = g / y + d * p * p;
  G(P, Q) = G(Q, P) = g * x / y - d * p * q;
  G(K, K) = d;
  G(P, K) = G(K, P) = d * q;
  G(Q, K) = G(K, Q) = -d * p;
  return G;
}

void require_case(int c, const ModelParameters & m)
{
  auto fail = [c](const char * why) { throw Error("metric case " + std::to_string(c) + ": " + why); };
  if (!(m.alpha > 0.0)) fail("alpha must be positive");
  switch (c) {
    case 1:
      if (m.beta != 0.0 || m.gamma != 0.0 || m.delta != 0.0) fail("requires beta = gamma = delta = 0");
      break;
    case 2:
      if (m.gamma != 0.0 || m.delta != 0.0) fail("requires gamma = delta = 0");
      if (!(m.beta > 0.0)) fail("requires alpha*beta != 0");
      break;
    case 3:
      if (m.beta != 0.0 || m.delta != 0.0) fail("requires beta = delta = 0");
      if (!(m.gamma > 0.0)) fail("requires gamma > 0");
      break;
    case 4:
      if (m.beta != 0.0) fail("requires beta = 0");
      if (!(m.gamma > 0.0) || !(m.delta > 0.0)) fail("requires gamma, delta > 0");
      break;
    case 5:
      if (!(m.beta > 0.0) || !(m.gamma > 0.0) || !(m.delta > 0.0)) fail("requires alpha*beta*gamma*delta != 0");
      break;
    default: throw Error("metric case must be 1..5");
  }
}

}  // namespace

MetricMatrix metric_matrix(int metric_case, const ModelParameters & m, const ChartPoint & at)
{
  require_case(metric_case, m);
  const Chart & chart = *at.chart();
  const Chart & expected = *metric_chart(metric_case);
  if (chart.dimension() != expected.dimension())
    throw ChartMismatch("metric case " + std::to_string(metric_case) + " needs coordinates of chart '" +
                        expected.name() + "'");
  static const char * group_names[] = {"x", "y", "theta_ang", "p", "q", "kappa"};
  std::vector<int> slot;  // group index of each chart coordinate
  for (const auto & name : chart.coordinates()) {
    if (!expected.find(name)) throw ChartMismatch("metric case " + std::to_string(metric_case) + ": unexpected coordinate '" + name + "'");
    for (int g = 0; g < 6; ++g)
      if (name == group_names[g]) slot.push_back(g);
  }
  const double x = at["x"], y = at["y"];
  if (!(y > 0.0)) throw DomainError("metric_matrix: y must be positive");
  const double p = chart.find("p") ? at["p"] : 0.0;
  const double q = chart.find("q") ? at["q"] : 0.0;
  const auto G = group_metric(m, x, y, p, q);
  const int d = chart.dimension();
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = G(slot[static_cast<std::size_t>(i)], slot[static_cast<std::size_t>(j)]);
  return {out, at};
}

std::array<Eigen::VectorXd, 6> invariant_one_forms(const ModelParameters & m, const ChartPoint & at)
{
  require_same_chart(*at.chart(), *group_chart(), "invariant_one_forms");
  const double x = at[0], y = at[1], t = at[2], p = at[3], q = at[4];
  const double sa = std::sqrt(m.alpha), sb = std::sqrt(m.beta), sg = std::sqrt(m.gamma), sd = std::sqrt(m.delta);
  const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t), c = std::cos(t), s = std::sin(t);
  const double ry = std::sqrt(y);
  std::array<Eigen::VectorXd, 6> l;
  for (auto & v : l) v = Eigen::VectorXd::Zero(6);
  enum { X, Y, T, P, Q, K };
  l[0][X] = sa / y * c2;
  l[0][Y] = sa / y * s2;
  l[1][X] = -sa / y * s2;
  l[1][Y] = sa / y * c2;
  l[2][X] = sb / y;
  l[2][T] = 2.0 * sb;
  l[3][Q] = -sg * s / ry;
  l[3][P] = sg * (ry * c - x * s / ry);
  l[4][Q] = sg * c / ry;
  l[4][P] = sg * (ry * s + x * c / ry);
  l[5][K] = sd;
  l[5][Q] = -sd * p;
  l[5][P] = sd * q;
  return l;
}

ChartMap cayley_map(const ModelParameters & m)
{
  m.validate();
  const ChartRef src = siegel_jacobi_chart();
  using C = std::complex<double>;
  auto image = [](std::span<const double> v) {
    const C I(0.0, 1.0);
    const C vv(v[0], v[1]);
    const double q = v[2], p = v[3];
    const C w = (vv - I) / (vv + I);
    const C z = 2.0 * I * (p * vv + q) / (vv + I);
    return std::array<double, 4>{w.real(), w.imag(), z.real(), z.imag()};
  };
  std::vector<ScalarField> comps;
  for (std::size_t k = 0; k < 4; ++k)
    comps.emplace_back(src, ScalarField::Evaluator([image, k](std::span<const double> v) { return image(v)[k]; }));
  return {src, siegel_jacobi_disk_chart(), std::move(comps)};
}

KForm disk_kahler_form(const ModelParameters & m)
{
  m.validate();
  const ChartRef chart = siegel_jacobi_disk_chart();
  const auto sym = chart->symbols(m.table());
  auto e = [&](std::string_view text) { return ScalarField(chart, expr::parse(text, sym)); };
  // 𝒜 = dz + conj(η) dw with η = (z + conj(z) w)/P = e1 + i e2
  const ScalarField P = e("1 - w1^2 - w2^2");
  const ScalarField e1 = e("(z1*(1 + w1) + z2*w2)/(1 - w1^2 - w2^2)");
  const ScalarField e2 = e("(z2*(1 - w1) + z1*w2)/(1 - w1^2 - w2^2)");
  const ScalarField four_k = e("4*k"), two_nu = e("2*nu");
  const ScalarField s = two_nu / P;
  KForm omega(chart, 2);
  omega.add({0, 1}, four_k / (P * P) + s * (e1 * e1 + e2 * e2));
  omega.add({0, 2}, s * e2);
  omega.add({0, 3}, s * e1);
  omega.add({1, 2}, -(s * e1));
  omega.add({1, 3}, s * e2);
  omega.add({2, 3}, s);
  return omega;
}

ChartMap darboux_identification(const ModelParameters & m)
{
  m.validate();
  const ChartRef src = extended_siegel_jacobi_chart();
  const auto sym = src->symbols(m.table());
  auto e = [&](std::string_view text) { return ScalarField(src, expr::parse(text, sym)); };
  return {src, darboux_chart(2), {e("k*x"), e("2*nu*q"), e("-1/y"), e("p"), e("kappa")}};
}

}  // namespace cosym
