#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cosym/error.hpp"
#include "cosym/jacobi_flows.hpp"

using namespace cosym;

namespace {

double max_abs(const Eigen::VectorXd & v) { return v.cwiseAbs().maxCoeff(); }

LinearHamiltonianCoefficients random_coeffs(std::mt19937_64 & rng, const char * h = "0")
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LinearHamiltonianCoefficients c{u(rng), u(rng), u(rng), u(rng), u(rng), h};
  return c;
}

// hand-derived velocity fields, written directly from the partials of H
struct Partials
{
  double H, Hx, Hy, Hq, Hp, Hk;
};

Partials partials(const ScalarField & H, const ChartPoint & at)
{
  const Eigen::VectorXd g = H.gradient(at);
  return {H(at), g[0], g[1], g[2], g[3], g.size() > 4 ? g[4] : 0.0};
}

Eigen::VectorXd base_oracle(const Partials & d, const ModelParameters & m, double y)
{
  Eigen::VectorXd v(4);
  v << y * y * d.Hy / m.k, -y * y * d.Hx / m.k, d.Hp / (2 * m.nu), -d.Hq / (2 * m.nu);
  return v;
}

Eigen::VectorXd gtacos_oracle(const Partials & d, const ModelParameters & m, const ChartPoint & at)
{
  const double y = at["y"], q = at["q"], p = at["p"], s = std::sqrt(m.delta), n2 = 2 * m.nu;
  Eigen::VectorXd v(5);
  v << y * y * d.Hy / m.k, -y * y * d.Hx / m.k, (d.Hp - q * d.Hk) / n2, -(d.Hq + p * d.Hk) / n2,
      (p * d.Hp + q * d.Hq) / n2 - d.H / s;
  return v;
}

Eigen::VectorXd contact_oracle(const Partials & d, const ModelParameters & m, const ChartPoint & at)
{
  const double y = at["y"], q = at["q"], p = at["p"], s = std::sqrt(m.delta), n2 = 2 * m.nu;
  const double RH = d.Hk / s;
  Eigen::VectorXd v(5);
  v << y * y * d.Hy / m.k, -y * y * d.Hx / m.k + y * d.Hk / s, d.Hp / n2 - q * RH / 2, -d.Hq / n2 - p * RH / 2,
      (-d.H - y * d.Hy + (p * d.Hp + q * d.Hq) / 2) / s;
  return v;
}

}  // namespace

TEST(Energy, HandValue)
{
  LinearHamiltonianCoefficients c;
  c.m = 0.5;
  c.c_lin = 0.5;
  const ChartPoint at(extended_siegel_jacobi_chart(), {0, 1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(energy(c, ModelParameters{}, at), 1.0);
  EXPECT_EQ(energy(LinearHamiltonianCoefficients{}, ModelParameters{}, at), 0.0);
}

TEST(Energy, SplitIsIndependent)
{
  std::mt19937_64 rng(3);
  const auto e = split_energy(random_coeffs(rng, "kappa^2"), ModelParameters::from_kn(2, 3, 1), variant_chart(FlowVariant::gtacos));
  const auto & c = *e.total.chart();
  for (const char * v : {"x", "y"}) EXPECT_TRUE(e.H_pq.derivative(c.index_of(v)).is_zero());
  for (const char * v : {"q", "p"}) EXPECT_TRUE(e.H_xy.derivative(c.index_of(v)).is_zero());
  for (const char * v : {"x", "y", "q", "p"}) EXPECT_TRUE(e.h_kappa.derivative(c.index_of(v)).is_zero());
}

TEST(Energy, KappaTermRestrictions)
{
  LinearHamiltonianCoefficients c;
  c.h_kappa = "x*kappa";
  EXPECT_THROW(split_energy(c, ModelParameters{}, variant_chart(FlowVariant::gtacos)), Error);
  c.h_kappa = "kappa";
  EXPECT_THROW(split_energy(c, ModelParameters{}, variant_chart(FlowVariant::base_xj1)), ChartMismatch);
}

TEST(Variants, Names)
{
  for (auto v : {FlowVariant::base_xj1, FlowVariant::gtacos, FlowVariant::contact})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("red"), Error);
  EXPECT_EQ(variant_chart(FlowVariant::base_xj1)->dimension(), 4);
  EXPECT_EQ(variant_chart(FlowVariant::contact)->dimension(), 5);
}

TEST(Riccati, HandValues)
{
  LinearHamiltonianCoefficients c;
  c.m = 0.25;
  c.c_lin = 0.75;
  EXPECT_LE(max_abs(riccati_rhs(c, 0, 1) - Eigen::Vector2d(1, 0)), 1e-15);
  LinearHamiltonianCoefficients d;
  d.n_lin = 1;
  EXPECT_LE(max_abs(riccati_rhs(d, 1, 1) - Eigen::Vector2d(2, 2)), 1e-15);
  EXPECT_EQ(riccati_rhs(LinearHamiltonianCoefficients{}, 0.4, 2.0), Eigen::Vector2d::Zero());
}

TEST(Riccati, MatchesSymplecticFieldOfHxy)
{
  std::mt19937_64 rng(9);
  const ModelParameters m = ModelParameters::from_kn(1.7, 0.4, 1);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_coeffs(rng);
    const ChartPoint at = random_point(siegel_jacobi_chart(), rng);
    const auto e = split_energy(c, m, at.chart());
    const Eigen::VectorXd X = symplectic_field(e.H_xy, m, at);
    EXPECT_LE(max_abs(X.head<2>() - riccati_rhs(c, at["x"], at["y"])), 1e-12);
  }
}

TEST(Eom, CoordinateHamiltonianOnGtacos)
{
  // H = q via generic solve on the extended chart
  const ModelParameters m;
  const auto s = xjt_gtacos(m);
  const ChartPoint at(s.chart(), {0, 1, 2, 3, 0});
  Eigen::VectorXd expect(5);
  expect << 0, 0, 0, -0.5, -1;
  EXPECT_LE(max_abs(hamiltonian_field_generic(s, ScalarField::parse(s.chart(), "q"), at) - expect), 1e-14);
}

TEST(Eom, VariantsAgainstHandDerivedFields)
{
  std::mt19937_64 rng(10);
  const char * hs[] = {"0", "kappa", "kappa^2/3", "sin(kappa)"};
  for (int i = 0; i < 12; ++i) {
    const ModelParameters m = ModelParameters::from_kn(0.5 + i * 0.1, 0.3 + i * 0.05, 0.5 + i * 0.2);
    const auto c = random_coeffs(rng, hs[i % 4]);
    const ChartPoint at = random_point(extended_siegel_jacobi_chart(), rng);
    const auto e = split_energy(c, m, at.chart());
    const Partials d = partials(e.total, at);
    EXPECT_LE(max_abs(eom(c, FlowVariant::gtacos, m, at) - gtacos_oracle(d, m, at)), 1e-10);
    EXPECT_LE(max_abs(eom(c, FlowVariant::contact, m, at) - contact_oracle(d, m, at)), 1e-10);

    LinearHamiltonianCoefficients flat = c;
    flat.h_kappa = "0";
    const ChartPoint b(variant_chart(FlowVariant::base_xj1), {at[0], at[1], at[2], at[3]});
    const Partials db = partials(split_energy(flat, m, b.chart()).total, b);
    EXPECT_LE(max_abs(eom(flat, FlowVariant::base_xj1, m, b) - base_oracle(db, m, at["y"])), 1e-10);
  }
}

TEST(Eom, ZeroHamiltonian)
{
  const ChartPoint at(extended_siegel_jacobi_chart(), {0.2, 0.9, 1, -1, 0.5});
  for (auto v : {FlowVariant::gtacos, FlowVariant::contact})
    EXPECT_EQ(max_abs(eom(LinearHamiltonianCoefficients{}, v, ModelParameters{}, at)), 0.0);
}

TEST(RedGreen, Corrections)
{
  std::mt19937_64 rng(12);
  const ModelParameters m;
  const ChartPoint at(extended_siegel_jacobi_chart(), {0, 1, 1, 1, 0});
  const auto plain = random_coeffs(rng);
  const auto rg = red_green_decomposition(plain, FlowVariant::gtacos, m, at);
  EXPECT_LE(max_abs(rg.correction.head<4>()), 1e-14);
  LinearHamiltonianCoefficients c;
  c.h_kappa = "kappa";
  const auto r = red_green_decomposition(c, FlowVariant::gtacos, m, at);
  EXPECT_NEAR(r.correction[2], -0.5, 1e-14);
  EXPECT_NEAR(r.correction[3], -0.5, 1e-14);
  const auto k = red_green_decomposition(plain, FlowVariant::contact, m, at);
  EXPECT_LE(std::abs(k.correction[0]), 1e-14);
  EXPECT_LE(std::abs(k.correction[1]), 1e-14);
  EXPECT_LE(std::abs(k.correction[2]), 1e-14);
  EXPECT_LE(max_abs(rg.base + rg.correction - eom(plain, FlowVariant::gtacos, m, at)), 1e-14);
}

TEST(Brackets, PoissonOnSiegelJacobiAgainstClosedForm)
{
  std::mt19937_64 rng(13);
  const ModelParameters m = ModelParameters::from_kn(1.3, 0.6, 1);
  const ChartRef c = siegel_jacobi_chart();
  for (int i = 0; i < 10; ++i) {
    const ScalarField f = ScalarField::parse(c, "x*q + y*p + x^2*y"), g = ScalarField::parse(c, "x^2 + q*p + sin(y)");
    const ChartPoint at = random_point(c, rng);
    const Eigen::VectorXd a = f.gradient(at), b = g.gradient(at);
    const double y = at["y"];
    const double expect = y * y / m.k * (a[0] * b[1] - a[1] * b[0]) + (a[2] * b[3] - a[3] * b[2]) / (2 * m.nu);
    EXPECT_NEAR(poisson_bracket_xj1(f, g, m, at), expect, 1e-12);
    EXPECT_NEAR(poisson_bracket_xj1(f, f, m, at), 0.0, 1e-13);
  }
}

TEST(Brackets, EulerOperatorOnExtendedChart)
{
  std::mt19937_64 rng(14);
  const ModelParameters m = ModelParameters::from_kn(2.0, 0.7, 1.5);
  const ChartRef c = extended_siegel_jacobi_chart();
  const ScalarField f = ScalarField::parse(c, "y^2*p + x + q*kappa*y + p^2");
  for (int i = 0; i < 10; ++i) {
    const ChartPoint at = random_point(c, rng);
    const Eigen::VectorXd g = f.gradient(at);
    EXPECT_NEAR(euler_operator_xjt(f, m, at), f(at) + at["y"] * g[1] - at["p"] * g[3], 1e-10);
  }
}

TEST(PaperVerbatim, EveryPrintedFormDeviates)
{
  const auto c = LinearHamiltonianCoefficients::reference();
  const ChartPoint at(extended_siegel_jacobi_chart(), {0.3, 1.2, 0.4, -0.5, 0.1});
  const auto report = paper_verbatim_report(c, ModelParameters::from_kn(1, 1, 2), at);
  ASSERT_EQ(report.size(), 7u);
  for (const auto & r : report) {
    EXPECT_GT(r.max_abs_deviation, 1e-6) << r.name;
    EXPECT_EQ(r.printed.size(), r.derived.size());
    EXPECT_NEAR(r.max_abs_deviation, max_abs(r.printed - r.derived), 1e-15);
  }
  EXPECT_EQ(report[0].name, "riccati_xy");
  EXPECT_LE(max_abs(report[0].derived - riccati_rhs(c, 0.3, 1.2)), 1e-15);
}

TEST(Integration, RiccatiProjectionMatchesDirectFlow)
{
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.1, 1.0);
  for (int i = 0; i < 3; ++i) {
    auto c = random_coeffs(rng);
    const double mc = w(rng);
    c.m = mc - c.c_lin;
    const ModelParameters m;
    const ChartPoint x0(extended_siegel_jacobi_chart(), {0.5 * u(rng), 1.0 + 0.5 * u(rng), u(rng), u(rng), 0.0});
    const auto full = integrate_variant(c, FlowVariant::gtacos, m, x0, 1.0, 0.05);
    const auto xy = integrate_riccati(c, m, x0["x"], x0["y"], 1.0, 0.05);
    ASSERT_EQ(full.states.size(), xy.states.size());
    for (std::size_t k = 0; k < xy.states.size(); ++k) {
      EXPECT_NEAR(full.states[k]["x"], xy.states[k]["x"], 1e-6);
      EXPECT_NEAR(full.states[k]["y"], xy.states[k]["y"], 1e-6);
    }
  }
}

TEST(Integration, GtacosDissipationLaw)
{
  LinearHamiltonianCoefficients c{0.2, 0.1, 0.3, 0.2, -0.1, "kappa"};
  const ChartPoint x0(extended_siegel_jacobi_chart(), {0.1, 1.0, 0.5, -0.3, 0.2});
  const auto t = integrate_variant(c, FlowVariant::gtacos, ModelParameters::from_kn(1, 1, 4), x0, 1.0, 0.01);
  ASSERT_TRUE(t.complete);
  for (std::size_t i = 1; i + 1 < t.times.size(); ++i) EXPECT_LE(t.dissipation_residuals[i], 1e-4);
  for (const auto & p : t.states) EXPECT_GT(p["y"], 0.0);
}
