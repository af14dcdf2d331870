#include "cosym/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "cosym/dynamics.hpp"

namespace cosym {

ScalarField random_polynomial(const ChartRef & chart, std::mt19937_64 & rng, int terms, int max_degree)
{
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, chart->dimension() - 1);
  std::uniform_int_distribution<int> degree(0, max_degree);
  expr::Expr out(0.0);
  for (int t = 0; t < terms; ++t) {
    expr::Expr mono(coeff(rng));
    for (int d = degree(rng); d > 0; --d) {
      const int i = var(rng);
      mono = mono * expr::Expr::variable(chart->coordinates()[static_cast<std::size_t>(i)], i);
    }
    out = out + mono;
  }
  return {chart, out};
}

namespace {

StructureSpec catalog_instance(const std::string & name, const ModelParameters & m)
{
  if (name.find("(n)") != std::string::npos) return builtin(name.substr(0, name.size() - 3) + "(2)", m);
  return builtin(name, m);
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(std::uint64_t seed, const ModelParameters & m)
{
  std::mt19937_64 rng(seed);
  std::vector<InvariantCheck> out;
  auto record = [&](const std::string & s, std::string prop, double v, double tol) {
    out.push_back({s, std::move(prop), v, tol, v <= tol});
  };

  for (const auto & entry : builtin_catalog()) {
    const StructureSpec s = catalog_instance(entry.name, m);
    const auto probes = probe_points(s.chart(), 64);
    double r_omega = 0.0, r_theta = 0.0, min_volume = INFINITY;
    for (const auto & p : probes) {
      const Eigen::VectorXd R = reeb(s, p);
      r_omega = std::max(r_omega, (s.omega()(p).matrix().transpose() * R).cwiseAbs().maxCoeff());
      r_theta = std::max(r_theta, std::abs(s.theta()(p).vector().dot(R) - 1.0));
      min_volume = std::min(min_volume, std::abs(s.volume(p)));
    }
    record(s.name(), "reeb_omega", r_omega, 1e-11);
    record(s.name(), "reeb_theta", r_theta, 1e-11);
    record(s.name(), "acos_volume_nonzero", min_volume > 1e-9 ? 0.0 : 1.0, 0.0);
    const StructureClass cls = classify(s, probes);
    record(s.name(), "acos_flag", cls.acos ? 0.0 : 1.0, 0.0);

    double dissipation = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField H = random_polynomial(s.chart(), rng);
      const ChartPoint p = random_point(s.chart(), rng);
      const Eigen::VectorXd X = hamiltonian_field_generic(s, H, p);
      dissipation = std::max(dissipation, std::abs(H.gradient(p).dot(X) + H(p) * reeb_derivative(s, H, p)));
    }
    record(s.name(), "dissipation_law", dissipation, 1e-8);
  }

  for (int n = 1; n <= 2; ++n) {
    const ChartRef chart = darboux_chart(n);
    double anti = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField f = random_polynomial(chart, rng), g = random_polynomial(chart, rng);
      const ChartPoint p = random_point(chart, rng);
      anti = std::max(anti, std::abs(jacobi_bracket(f, g, p) + jacobi_bracket(g, f, p)));
    }
    record("darboux_contact(" + std::to_string(n) + ")", "jacobi_bracket_antisymmetry", anti, 1e-12);
  }
  return out;
}

}  // namespace cosym
