#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cosym/dynamics.hpp"
#include "cosym/manifolds.hpp"

namespace cosym {

/// Real coefficients of a Hamiltonian linear in the Jacobi generators
/// (ε_a = a + ib, ε₀ = 2c_lin, ε₊ = m − i n_lin), plus a κ-only term h(κ).
struct LinearHamiltonianCoefficients
{
  double a{0.0};
  double b{0.0};
  double c_lin{0.0};
  double m{0.0};
  double n_lin{0.0};
  /// Expression in `kappa` only.
  std::string h_kappa{"0"};

  /// {a, b, c_lin, m, n_lin} merged with the model's {k, nu, delta}.
  Parameters table(const ModelParameters & model) const;

  /// Fixed set with every coefficient and h nonzero, used by the printed-form report.
  static LinearHamiltonianCoefficients reference();
};

/// H = H_pq(q,p) + H_xy(x,y) + h(κ) on a chart with coordinates x, y, q, p and optionally kappa.
struct SplitEnergy
{
  ScalarField H_pq;
  ScalarField H_xy;
  ScalarField h_kappa;
  ScalarField total;
};

/// Throws Error if h_kappa mentions anything but kappa, or is nonzero on a chart without kappa.
SplitEnergy split_energy(const LinearHamiltonianCoefficients & c, const ModelParameters & m, const ChartRef & chart);

/// H_pq + H_xy at a point carrying x, y, q, p (h(κ) excluded).
double energy(const LinearHamiltonianCoefficients & c, const ModelParameters & m, const ChartPoint & at);

enum class FlowVariant { base_xj1, gtacos, contact };

std::string_view to_string(FlowVariant v);
/// Throws Error on unknown names.
FlowVariant parse_variant(std::string_view name);

/// Chart the variant lives on: (x,y,q,p) for base_xj1, (x,y,q,p,kappa) otherwise.
ChartRef variant_chart(FlowVariant v);

/// X⌟ω = dH with ω = (k/y²) dx∧dy + 2ν dq∧dp on the (x,y,q,p) chart.
Eigen::VectorXd symplectic_field(const ScalarField & H, const ModelParameters & m, const ChartPoint & at);

/// Velocity of the variant at `at`; a 4-vector for base_xj1, 5-vector otherwise.
Eigen::VectorXd eom(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                    const ChartPoint & at);

/// (ẋ, ẏ) = ((m+c)(y² − x²) + 2nx, 2y(n − (m+c)x)).
Eigen::Vector2d riccati_rhs(const LinearHamiltonianCoefficients & c, double x, double y);

/// The printed closed form of the (x,y) flow, evaluated literally.
Eigen::Vector2d riccati_rhs_printed(const LinearHamiltonianCoefficients & c, double x, double y);

struct RedGreen
{
  /// base_xj1 velocity padded with κ̇ = 0.
  Eigen::VectorXd base;
  Eigen::VectorXd correction;
};

/// Split of eom(variant) into the base_xj1 field and the κ-driven correction.
RedGreen red_green_decomposition(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                                 const ChartPoint & at);

struct PrintedDiscrepancy
{
  std::string name;
  std::vector<std::string> components;
  Eigen::VectorXd printed;
  Eigen::VectorXd derived;
  double max_abs_deviation{0.0};
};

/// Printed closed forms against the derived ones at a point of the extended chart:
/// riccati_xy, pq_block, kappa_rate (gtacos), contact_field, contact_kappa_rate,
/// poisson_bracket_xj1 (for f = x·q + y·p, g = x² + q·p) and euler_operator (for f = y²p + x).
std::vector<PrintedDiscrepancy> paper_verbatim_report(const LinearHamiltonianCoefficients & c,
                                                      const ModelParameters & m, const ChartPoint & at);

/// Poisson bracket of ω on (x,y,q,p): ω(X_f, X_g).
double poisson_bracket_xj1(const ScalarField & f, const ScalarField & g, const ModelParameters & m,
                           const ChartPoint & at);
/// Printed closed form of the same bracket.
double poisson_bracket_xj1_printed(const ScalarField & f, const ScalarField & g, const ModelParameters & m,
                                   const ChartPoint & at);

/// f − Σ P_i ∂f/∂P_i in Darboux coordinates (Q, P, κ), transported to the extended chart.
double euler_operator_xjt(const ScalarField & f, const ModelParameters & m, const ChartPoint & at);
/// Printed closed form f + f_y/y³ − p f_p.
double euler_operator_xjt_printed(const ScalarField & f, const ChartPoint & at);

/// Integrates the variant's velocity field; H is the total energy on the variant chart.
Trajectory integrate_variant(const LinearHamiltonianCoefficients & c, FlowVariant v, const ModelParameters & m,
                             const ChartPoint & x0, double t_end, double dt, const IntegrationOptions & options = {});

/// Integrates riccati_rhs on the (x, y) half-plane; H column is H_xy.
Trajectory integrate_riccati(const LinearHamiltonianCoefficients & c, const ModelParameters & m, double x0, double y0,
                             double t_end, double dt, const IntegrationOptions & options = {});

}  // namespace cosym
