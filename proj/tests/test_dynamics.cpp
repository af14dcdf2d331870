#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cosym/dynamics.hpp"
#include "cosym/error.hpp"
#include "cosym/invariants.hpp"
#include "cosym/manifolds.hpp"

using namespace cosym;

namespace {

double max_abs(const Eigen::VectorXd & v) { return v.cwiseAbs().maxCoeff(); }

ScalarField field(const StructureSpec & s, const char * text) { return ScalarField::parse(s.chart(), text); }

}  // namespace

TEST(HamiltonianField, ContactDarbouxExamples)
{
  const auto s = darboux_contact(1);
  EXPECT_LE(max_abs(hamiltonian_field_generic(s, field(s, "kappa"), ChartPoint(s.chart(), {1, 2, 3})) -
                    Eigen::Vector3d(0, -2, -3)),
            1e-14);
  for (const auto & at : probe_points(s.chart(), 8))
    EXPECT_LE(max_abs(hamiltonian_field_generic(s, field(s, "p"), at) - Eigen::Vector3d(1, 0, 0)), 1e-14);
  EXPECT_LE(max_abs(hamiltonian_field_generic(s, field(s, "(p^2 + q^2)/2"), ChartPoint(s.chart(), {1, 2, 0})) -
                    Eigen::Vector3d(2, -1, 1.5)),
            1e-14);
}

TEST(HamiltonianField, ClosedFormHandValues)
{
  // θ(X) = (1 − 21)/4 = −5 forces B = a/4, A = −b/4, C = −5/4
  CanonicalThetaSpec spec{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2), 4.0};
  const ChartPoint at(darboux_chart(2), {0, 0, 0, 0, 5});
  const auto X = hamiltonian_field_closed(spec, ScalarField::parse(at.chart(), "kappa"), at);
  EXPECT_LE(max_abs(X.A - Eigen::Vector2d(0, -0.5)), 1e-15);
  EXPECT_LE(max_abs(X.B - Eigen::Vector2d(0.25, 0)), 1e-15);
  EXPECT_DOUBLE_EQ(X.C, -1.25);
}

TEST(HamiltonianField, CoordinateHamiltonianClosedForm)
{
  CanonicalThetaSpec spec{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2), 1.0};
  const ChartPoint at(darboux_chart(2), {0.7, -1.1, 0.2, 0.4, 3.0});
  const auto X = hamiltonian_field_closed(spec, ScalarField::parse(at.chart(), "q2"), at);
  Eigen::VectorXd expect(5);
  expect << 0, 0, 0, -1, -(-1.1);
  EXPECT_LE(max_abs(X.vector() - expect), 1e-15);
}

TEST(HamiltonianField, ClosedFormMatchesGenericSolve)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      CanonicalThetaSpec spec{Eigen::VectorXd(n), Eigen::VectorXd(n), 0.5 + std::abs(u(rng))};
      for (int i = 0; i < n; ++i) {
        spec.a[i] = u(rng);
        spec.b[i] = u(rng);
      }
      const auto s = spec.structure();
      const ScalarField H = random_polynomial(s.chart(), rng, 5, 3);
      const ChartPoint at = random_point(s.chart(), rng);
      const Eigen::VectorXd g = hamiltonian_field_generic(s, H, at);
      const Eigen::VectorXd c = hamiltonian_field_closed(spec, H, at).vector();
      EXPECT_LE(max_abs(g - c), 1e-9 * std::max(1.0, max_abs(c)));
    }
  }
}

TEST(HamiltonianField, ContractionWithThetaIsMinusH)
{
  std::mt19937_64 rng(2);
  for (const auto & s : {xjt_gtacos(ModelParameters::from_kn(2, 1.5, 3)), heisenberg(), darboux_contact(2)}) {
    const ScalarField H = random_polynomial(s.chart(), rng, 5, 2);
    for (const auto & at : probe_points(s.chart(), 8)) {
      const Eigen::VectorXd X = hamiltonian_field_generic(s, H, at);
      EXPECT_NEAR(s.theta()(at).vector().dot(X), -H(at), 1e-10 * std::max(1.0, std::abs(H(at))));
      // dissipation law
      EXPECT_NEAR(H.gradient(at).dot(X) + H(at) * reeb_derivative(s, H, at), 0.0,
                  1e-9 * std::max(1.0, max_abs(X)));
    }
  }
}

TEST(Gradient, Examples)
{
  const auto s = darboux_contact(1);
  EXPECT_LE(max_abs(gradient_field(s, field(s, "kappa"), ChartPoint(s.chart(), {0, 5, 2})) -
                    Eigen::Vector3d(0, -5, 1)),
            1e-14);
  EXPECT_EQ(gradient_field(s, field(s, "3"), ChartPoint(s.chart(), {1, 1, 1})), Eigen::Vector3d::Zero());
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField H = random_polynomial(s.chart(), rng, 5, 3);
    const ChartPoint at = random_point(s.chart(), rng);
    const Eigen::VectorXd R = reeb(s, at);
    const Eigen::VectorXd lhs = hamiltonian_field_generic(s, H, at) + (H(at) + reeb_derivative(s, H, at)) * R;
    EXPECT_LE(max_abs(lhs - gradient_field(s, H, at)), 1e-9);
  }
}

TEST(Evolution, CosymplecticExamples)
{
  const auto s = darboux_cosymplectic(1);
  const ChartPoint at(s.chart(), {0.4, -0.3, 1.0});
  EXPECT_LE(max_abs(evolution_field(s, field(s, "q"), at) - Eigen::Vector3d(0, -1, 1)), 1e-14);
  EXPECT_LE(max_abs(evolution_field(s, field(s, "0"), at) - reeb(s, at)), 1e-15);
  EXPECT_NEAR(s.theta()(at).vector().dot(evolution_field(s, field(s, "kappa"), at)), 1.0, 1e-14);
  const auto c = darboux_contact(1);
  EXPECT_THROW(evolution_field(c, field(c, "q"), ChartPoint(c.chart(), {0, 0, 0})), DegenerateStructure);
}

TEST(Brackets, Examples)
{
  const ChartRef c = darboux_chart(1);
  const auto f = [&](const char * t) { return ScalarField::parse(c, t); };
  const ChartPoint at(c, {3.0, 0.5, -1.0});
  EXPECT_EQ(poisson_bracket(f("q"), f("p"), at), 1.0);
  EXPECT_EQ(jacobi_bracket(f("q"), f("p"), at), 1.0);
  EXPECT_DOUBLE_EQ(poisson_bracket(f("q^2"), f("p"), at), 6.0);
  EXPECT_DOUBLE_EQ(jacobi_bracket(f("kappa"), f("q"), ChartPoint(c, {2, 0, 7})), -2.0);
  EXPECT_EQ(euler_operator(f("p*q"))(at), 0.0);
  const auto g = f("sin(q)*p + kappa^2");
  EXPECT_EQ(poisson_bracket(g, g, at), 0.0);
}

TEST(Brackets, CanonicalPairsInTwoDegrees)
{
  const ChartRef c = darboux_chart(2);
  const auto & names = c->coordinates();
  const ChartPoint at(c, {0.1, 0.2, 0.3, 0.4, 0.5});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto q = ScalarField::coordinate(c, names[static_cast<std::size_t>(i)]);
      const auto p = ScalarField::coordinate(c, names[static_cast<std::size_t>(2 + j)]);
      EXPECT_EQ(poisson_bracket(q, p, at), i == j ? 1.0 : 0.0);
      EXPECT_EQ(jacobi_bracket(q, p, at), i == j ? 1.0 : 0.0);
    }
}

TEST(Brackets, JacobiIdentityAndSharpForm)
{
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 2; ++n) {
    const auto s = darboux_contact(n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_polynomial(s.chart(), rng), g = random_polynomial(s.chart(), rng),
                 h = random_polynomial(s.chart(), rng);
      const ChartPoint at = random_point(s.chart(), rng);
      const double jac = jacobi_bracket(f, jacobi_bracket(g, h), at) + jacobi_bracket(g, jacobi_bracket(h, f), at) +
                         jacobi_bracket(h, jacobi_bracket(f, g), at);
      EXPECT_LE(std::abs(jac), 1e-6);
      EXPECT_NEAR(jacobi_bracket(f, g, at), -jacobi_bracket(g, f, at), 1e-13);
      EXPECT_NEAR(jacobi_bracket_sharp(s, f, g, at), -jacobi_bracket(f, g, at), 1e-10);
    }
  }
}

TEST(Tacs, CorrectedCoordinateFields)
{
  const ChartPoint at(darboux_chart(1), {0.5, -0.8, 1.3});
  const auto cmp = compare_tacs_coordinate_fields(1, 0.7, at);
  ASSERT_EQ(cmp.size(), 3u);
  for (const auto & c : cmp) EXPECT_NEAR(c.discrepancy, max_abs(c.corrected - c.uncorrected), 1e-15);
}

TEST(Integrate, ExponentialDecayUnderKappa)
{
  const auto s = darboux_contact(1);
  const auto t = integrate(s, field(s, "kappa"), ChartPoint(s.chart(), {0, 1, 1}), 1.0, 0.01);
  ASSERT_TRUE(t.complete);
  ASSERT_EQ(t.times.size(), 101u);
  EXPECT_NEAR(t.states.back()["kappa"], std::exp(-1.0), 1e-6);
  EXPECT_NEAR(t.states.back()["p"], std::exp(-1.0), 1e-6);
  EXPECT_TRUE(std::isnan(t.dissipation_residuals.front()));
  for (std::size_t i = 1; i + 1 < t.times.size(); ++i) EXPECT_LE(t.dissipation_residuals[i], 1e-4);
}

TEST(Integrate, ConservationAndFixedStep)
{
  const auto s = darboux_contact(1);
  const auto H = field(s, "(p^2 + q^2)/2");
  for (Method method : {Method::rk45, Method::rk4}) {
    IntegrationOptions opt;
    opt.method = method;
    const auto t = integrate(s, H, ChartPoint(s.chart(), {0.3, 1.0, 0.0}), 1.0, 1e-3, opt);
    double drift = 0.0;
    for (double h : t.hamiltonian_values) drift = std::max(drift, std::abs(h - t.hamiltonian_values.front()));
    EXPECT_LE(drift, 1e-6);
  }
}

TEST(Integrate, ZeroHamiltonianAndZeroDuration)
{
  const auto s = heisenberg();
  const ChartPoint x0(s.chart(), {0.1, 0.2, 0.3});
  const auto t = integrate(s, field(s, "0"), x0, 0.5, 0.1);
  for (const auto & p : t.states) EXPECT_EQ(p.values(), x0.values());
  const auto z = integrate(s, field(s, "x"), x0, 0.0, 0.1);
  ASSERT_EQ(z.states.size(), 1u);
  EXPECT_EQ(z.states[0].values(), x0.values());
}

TEST(Integrate, UpperHalfPlaneIsPreserved)
{
  const auto s = xjt_gtacos(ModelParameters{});
  // H = x: ẏ = −y², so y = 1/(2 + t)
  const auto t = integrate(s, ScalarField::parse(s.chart(), "x"), ChartPoint(s.chart(), {0, 0.5, 0, 0, 0}), 5.0, 0.1);
  EXPECT_TRUE(t.complete);
  for (const auto & p : t.states) EXPECT_GT(p["y"], 0.0);
  EXPECT_NEAR(t.states.back()["y"], 1.0 / 7.0, 1e-7);
}

TEST(Integrate, LeavingTheDomainStopsEarly)
{
  const ChartRef c = Chart::make("half", {"q", "p", "kappa"}, {DomainGuard{"p", GuardOp::greater, 0.0}});
  KForm theta(c, 1), omega(c, 2);
  theta.add({2}, "1").add({0}, "-p");
  omega.add({0, 1}, "1");
  const StructureSpec s("half_contact", theta, omega);
  // ṗ = −1 reaches the guard at t = 0.5
  const auto t = integrate(s, ScalarField::parse(c, "q"), ChartPoint(c, {0, 0.5, 0}), 2.0, 0.1);
  EXPECT_FALSE(t.complete);
  EXPECT_FALSE(t.diagnostic.empty());
  EXPECT_LE(t.times.back(), 0.5 + 1e-12);
  for (const auto & p : t.states) EXPECT_GT(p["p"], 0.0);
}
