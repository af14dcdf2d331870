#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cosym/forms.hpp"
#include "cosym/invariants.hpp"
#include "cosym/manifolds.hpp"

using namespace cosym;

namespace {

int perm_sign(std::vector<int> p)
{
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
      s = -s;
    }
  return s;
}

// fully antisymmetric tensor of a form value, as a dense function of an index tuple
double tensor(const FormValue<double> & f, const std::vector<int> & idx) { return f[idx]; }

// (a∧b)(e_I) = 1/(j!k!) Σ_σ sgn σ a(e_σ..) b(e_σ..)
double wedge_oracle(const FormValue<double> & a, const FormValue<double> & b, const std::vector<int> & I)
{
  const int j = a.degree(), k = b.degree();
  std::vector<int> perm(I.size());
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0.0;
  do {
    std::vector<int> ia, ib;
    for (int r = 0; r < j; ++r) ia.push_back(I[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])]);
    for (int r = 0; r < k; ++r) ib.push_back(I[static_cast<std::size_t>(perm[static_cast<std::size_t>(j + r)])]);
    sum += perm_sign(perm) * tensor(a, ia) * tensor(b, ib);
  } while (std::next_permutation(perm.begin(), perm.end()));
  double fact = 1.0;
  for (int r = 2; r <= j; ++r) fact *= r;
  for (int r = 2; r <= k; ++r) fact *= r;
  return sum / fact;
}

FormValue<double> random_form(int n, int k, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FormValue<double> f(n, k);
  for (const auto & idx : increasing_indices(n, k)) f.add(idx, u(rng));
  return f;
}

double c2(const FormValue<double> & f, int i, int j) { return f[{i, j}]; }

}  // namespace

TEST(FormValue, NormalizeSigns)
{
  MultiIndex a{2, 0, 1};
  EXPECT_EQ(normalize(a), 1);
  EXPECT_EQ(a, (MultiIndex{0, 1, 2}));
  MultiIndex b{1, 0};
  EXPECT_EQ(normalize(b), -1);
  MultiIndex c{1, 3, 1};
  EXPECT_EQ(normalize(c), 0);
}

TEST(FormValue, WedgeMatchesPermutationOracle)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5;
    const auto a = random_form(n, 1, rng), b = random_form(n, 2, rng);
    const auto w = wedge(a, b);
    for (const auto & I : increasing_indices(n, 3)) EXPECT_NEAR(w[I], wedge_oracle(a, b, I), 1e-13);
    const auto c = random_form(n, 2, rng);
    const auto w4 = wedge(b, c);
    for (const auto & I : increasing_indices(n, 4)) EXPECT_NEAR(w4[I], wedge_oracle(b, c, I), 1e-13);
  }
}

TEST(FormValue, InteriorProductMatchesMatrixAssembly)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_form(5, 2, rng);
    Eigen::VectorXd X(5);
    for (int i = 0; i < 5; ++i) X[i] = u(rng);
    const Eigen::VectorXd expect = w.matrix().transpose() * X;
    const Eigen::VectorXd got = interior_product(X, w).vector();
    EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FormValue, EvaluateIsDeterminantSum)
{
  FormValue<double> w(3, 2);
  w.add({0, 1}, 2.0).add({2, 1}, 3.0);
  Eigen::MatrixXd v(3, 2);
  v << 1, 0, 0, 1, 0, 0;
  EXPECT_DOUBLE_EQ(w.evaluate(v), 2.0);
  v << 0, 0, 1, 0, 0, 1;
  EXPECT_DOUBLE_EQ(w.evaluate(v), -3.0);
}

TEST(KForm, RepeatedFactorVanishes)
{
  const ChartRef c = darboux_chart(1);
  const auto dq = KForm::differential(ScalarField::coordinate(c, "q"));
  const auto dp = KForm::differential(ScalarField::coordinate(c, "p"));
  const auto w = wedge(wedge(dq, dp), dq);
  EXPECT_EQ(w(ChartPoint(c, {0.3, -1.0, 2.0})).max_abs(), 0.0);
}

TEST(KForm, ExteriorDerivativeOfContactForm)
{
  const ChartRef c = darboux_chart(1);
  KForm eta(c, 1);
  eta.add({2}, "1").add({0}, "-p");
  const auto d = exterior_derivative(eta);
  const auto v = d(ChartPoint(c, {0.4, 1.1, -0.2}));
  EXPECT_DOUBLE_EQ(c2(v, 0, 1), 1.0);
  EXPECT_EQ(v.components().size(), 1u);
}

TEST(KForm, DerivativeOfEtaZeroIsOmega)
{
  const ModelParameters m = ModelParameters::from_kn(1.7, 0.6, 2.5);
  const ChartRef c = extended_siegel_jacobi_chart();
  KForm eta(c, 1);
  eta.add({4}, "sqrt(delta)", m.table()).add({0}, "k/y", m.table());
  eta.add({2}, "-nu*p", m.table()).add({3}, "nu*q", m.table());
  const auto d = exterior_derivative(eta);
  for (const auto & at : probe_points(c, 16)) {
    const auto v = d(at);
    const double y = at["y"];
    EXPECT_NEAR(c2(v, 0, 1), m.k / (y * y), 1e-13);
    EXPECT_NEAR(c2(v, 2, 3), 2.0 * m.nu, 1e-13);
    EXPECT_NEAR(std::abs(c2(v, 0, 2)) + std::abs(c2(v, 1, 4)) + std::abs(c2(v, 3, 4)), 0.0, 1e-14);
  }
}

TEST(KForm, DSquaredVanishes)
{
  std::mt19937_64 rng(5);
  const ChartRef c = extended_siegel_jacobi_chart();
  for (int trial = 0; trial < 5; ++trial) {
    KForm a(c, 1);
    for (int i = 0; i < 5; ++i) a.add({i}, random_polynomial(c, rng, 4, 3));
    const auto dd = exterior_derivative(exterior_derivative(a));
    for (const auto & at : probe_points(c, 8)) EXPECT_LE(dd(at).max_abs(), 1e-10);
    KForm b(c, 2);
    b.add({0, 3}, random_polynomial(c, rng)).add({1, 4}, random_polynomial(c, rng));
    const auto ddb = exterior_derivative(exterior_derivative(b));
    for (const auto & at : probe_points(c, 8)) EXPECT_LE(ddb(at).max_abs(), 1e-10);
  }
}

TEST(KForm, FiniteDifferenceCoefficientsGiveSameDerivative)
{
  const ChartRef c = darboux_chart(1);
  KForm a(c, 1);
  a.add({0}, ScalarField::parse(c, "sin(p)*kappa").with_mode(DerivativeMode::finite_difference));
  a.add({1}, ScalarField::parse(c, "q^2*kappa"));
  const auto v = exterior_derivative(a)(ChartPoint(c, {0.5, 0.2, 1.5}));
  EXPECT_NEAR(c2(v, 0, 1), 2 * 0.5 * 1.5 - std::cos(0.2) * 1.5, 1e-8);
  EXPECT_NEAR(c2(v, 0, 2), -std::sin(0.2), 1e-8);
  EXPECT_NEAR(c2(v, 1, 2), -0.25, 1e-8);
}

TEST(KForm, InteriorProducts)
{
  const ChartRef c = darboux_chart(1);
  KForm eta(c, 1);
  eta.add({2}, "1").add({0}, "-p");
  const ChartPoint at(c, {1.0, 2.0, 3.0});
  const VectorField dk = VectorField::constant(c, Eigen::Vector3d(0, 0, 1));
  EXPECT_DOUBLE_EQ(interior_product(dk, eta, at)[MultiIndex{}], 1.0);
  KForm w(c, 2);
  w.add({0, 1}, "1");
  const auto v = interior_product(VectorField::constant(c, Eigen::Vector3d(1, 0, 0)), w, at);
  EXPECT_EQ(v.vector(), Eigen::Vector3d(0, 1, 0));
  const auto f = interior_product(VectorField::constant(c, Eigen::Vector3d(1, 0, 0)), w);
  EXPECT_EQ(f(at).vector(), Eigen::Vector3d(0, 1, 0));
}

TEST(KForm, IdentityPullback)
{
  std::mt19937_64 rng(9);
  const ChartRef c = extended_siegel_jacobi_chart();
  KForm w(c, 2);
  w.add({0, 1}, random_polynomial(c, rng)).add({2, 4}, random_polynomial(c, rng));
  const ChartMap id = ChartMap::identity(c);
  for (const auto & at : probe_points(c, 8)) {
    EXPECT_LE((pullback(id, w, at) - w(at)).max_abs(), 1e-14);
    EXPECT_LE((pullback(id, w)(at) - w(at)).max_abs(), 1e-14);
  }
}

TEST(KForm, PullbackAlongLinearMap)
{
  // (u, v) -> (q, p, kappa) = (u + v, 2v, u); dq∧dp pulls back to 2 du∧dv
  const ChartRef src = Chart::make("uv", {"u", "v"});
  const ChartRef dst = darboux_chart(1);
  const ChartMap m(src, dst,
                   {ScalarField::parse(src, "u + v"), ScalarField::parse(src, "2*v"), ScalarField::parse(src, "u")});
  KForm w(dst, 2);
  w.add({0, 1}, "1");
  const auto v = pullback(m, w, ChartPoint(src, {0.1, 0.2}));
  EXPECT_DOUBLE_EQ(c2(v, 0, 1), 2.0);
  KForm dk(dst, 1);
  dk.add({2}, "kappa");
  EXPECT_EQ(pullback(m, dk)(ChartPoint(src, {3.0, 1.0})).vector(), Eigen::Vector2d(3.0, 0.0));
}
