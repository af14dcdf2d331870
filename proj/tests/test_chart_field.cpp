#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cosym/error.hpp"
#include "cosym/field.hpp"
#include "cosym/manifolds.hpp"

using namespace cosym;

TEST(Chart, GuardsRejectPointsOutsideTheDomain)
{
  const ChartRef c = siegel_jacobi_chart();
  EXPECT_NO_THROW(ChartPoint(c, {0.0, 1.0, 0.0, 0.0}));
  EXPECT_THROW(ChartPoint(c, {0.0, 0.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(ChartPoint(c, {0.0, -1.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(ChartPoint(c, {0.0, 1.0, 0.0}), Error);
  EXPECT_EQ(c->index_of("q"), 2);
  EXPECT_FALSE(c->find("kappa").has_value());
  EXPECT_THROW(c->index_of("kappa"), ChartMismatch);
}

TEST(Chart, DiskPredicateGuard)
{
  const ChartRef c = siegel_jacobi_disk_chart();
  EXPECT_NO_THROW(ChartPoint(c, {0.5, 0.5, 3.0, -3.0}));
  EXPECT_THROW(ChartPoint(c, {0.8, 0.8, 0.0, 0.0}), DomainError);
}

TEST(Chart, ProbesAreDeterministicAndInDomain)
{
  const ChartRef c = extended_siegel_jacobi_chart();
  const auto a = probe_points(c, 64);
  const auto b = probe_points(c, 64);
  ASSERT_EQ(a.size(), 64u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(c->contains(a[i].span()));
    EXPECT_EQ(a[i].values(), b[i].values());
  }
  for (const auto & p : probe_points(siegel_jacobi_disk_chart(), 32)) EXPECT_LT(p[0] * p[0] + p[1] * p[1], 1.0);
}

TEST(Chart, RandomPointsRespectGuards)
{
  std::mt19937_64 rng(7);
  const ChartRef c = extended_siegel_jacobi_chart();
  for (int i = 0; i < 200; ++i) EXPECT_GT(random_point(c, rng)["y"], 0.0);
}

TEST(Field, SymbolicDerivativesMatchFiniteDifferences)
{
  const ChartRef c = extended_siegel_jacobi_chart();
  const ModelParameters m = ModelParameters::from_kn(1.5, 0.7, 2.0);
  const ScalarField f =
      ScalarField::parse(c, "k*(x^2 + y^2)/y + sin(q*p) - nu*exp(kappa/3) + sqrt(delta)*log(y)*q", m.table());
  const ScalarField g = f.with_mode(DerivativeMode::finite_difference);
  EXPECT_TRUE(f.is_symbolic());
  EXPECT_EQ(g.mode(), DerivativeMode::finite_difference);
  for (const auto & p : probe_points(c, 32)) {
    const Eigen::VectorXd a = f.gradient(p), b = g.gradient(p);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(a[i], b[i], 1e-6 * std::max(1.0, std::abs(a[i])));
  }
}

TEST(Field, OpaqueFieldsUseCentralDifferences)
{
  const ChartRef c = Chart::make("plane", {"u", "v"});
  const ScalarField f(c, ScalarField::Evaluator([](std::span<const double> x) { return x[0] * x[0] * x[1]; }));
  EXPECT_FALSE(f.is_symbolic());
  const ChartPoint p(c, {1.5, -2.0});
  const Eigen::VectorXd g = f.gradient(p);
  EXPECT_NEAR(g[0], 2 * 1.5 * -2.0, 1e-8);
  EXPECT_NEAR(g[1], 1.5 * 1.5, 1e-8);
  EXPECT_THROW(f.expression(), Error);
}

TEST(Field, FdStepScalesWithMagnitude)
{
  const double e = std::cbrt(std::numeric_limits<double>::epsilon());
  EXPECT_DOUBLE_EQ(fd_step(0.0), e);
  EXPECT_DOUBLE_EQ(fd_step(0.5), e);
  EXPECT_DOUBLE_EQ(fd_step(-100.0), 100.0 * e);
}

TEST(Field, ArithmeticAndCoordinates)
{
  const ChartRef c = darboux_chart(1);
  const ScalarField q = ScalarField::coordinate(c, "q"), p = ScalarField::coordinate(c, 1);
  const ScalarField h = 0.5 * (q * q + p * p) - q / p;
  const ChartPoint at(c, {1.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(h(at), 2.5 - 0.5);
  EXPECT_DOUBLE_EQ(h.derivative("p")(at), 2.0 + 0.25);
  EXPECT_TRUE(ScalarField::constant(c, 0.0).is_zero());
  EXPECT_FALSE(q.is_zero());
}

TEST(Field, ParseRejectsUnknownIdentifiers)
{
  EXPECT_THROW(ScalarField::parse(darboux_chart(1), "q + y"), ParseError);
}
