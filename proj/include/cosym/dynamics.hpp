#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cosym/structures.hpp"

namespace cosym {

/// Components of X_H = A_i ∂/∂q^i + B_i ∂/∂p_i + C ∂/∂κ.
struct HamiltonianFieldCoefficients
{
  Eigen::VectorXd A;
  Eigen::VectorXd B;
  double C{0.0};

  /// Stacked (A, B, C) in Darboux chart order.
  Eigen::VectorXd vector() const;
};

/// R(H) = dH(R) at a point.
double reeb_derivative(const StructureSpec & s, const ScalarField & H, const ChartPoint & at);

/// Solves X♭ = dH − (R(H) + H) θ.
Eigen::VectorXd hamiltonian_field_generic(const StructureSpec & s, const ScalarField & H, const ChartPoint & at);

/// Closed form for canonical θ and Darboux Ω; `H` must live on darboux_chart(n).
HamiltonianFieldCoefficients hamiltonian_field_closed(const CanonicalThetaSpec & spec, const ScalarField & H,
                                                      const ChartPoint & at);

/// Solves (grad H)♭ = dH.
Eigen::VectorXd gradient_field(const StructureSpec & s, const ScalarField & H, const ChartPoint & at);

/// ℰ_H = X_H + R with X_H = grad H − R(H) R; throws DegenerateStructure unless dθ = dΩ = 0 at the point.
Eigen::VectorXd evolution_field(const StructureSpec & s, const ScalarField & H, const ChartPoint & at,
                                double tol = 1e-9);

/// {f, g} = Σ ∂f/∂q^i ∂g/∂p_i − ∂f/∂p_i ∂g/∂q^i on a chart with Darboux naming.
double poisson_bracket(const ScalarField & f, const ScalarField & g, const ChartPoint & at);

/// f_e = f − p_i ∂f/∂p_i.
ScalarField euler_operator(const ScalarField & f);

/// {f,g}_P + f_e ∂g/∂κ − g_e ∂f/∂κ.
double jacobi_bracket(const ScalarField & f, const ScalarField & g, const ChartPoint & at);
/// Same bracket as a field (symbolic when f and g are), for iterated brackets.
ScalarField jacobi_bracket(const ScalarField & f, const ScalarField & g);

/// −dθ(♯df, ♯dg) − R(g) f + g R(f) on a contact structure; equals −jacobi_bracket.
double jacobi_bracket_sharp(const StructureSpec & s, const ScalarField & f, const ScalarField & g,
                            const ChartPoint & at);

/// One uncorrected/corrected coordinate-field pair for the ε-TACS comparison.
struct CoordinateFieldComparison
{
  std::string field;
  Eigen::VectorXd corrected;
  Eigen::VectorXd uncorrected;
  double discrepancy{0.0};
};

/**
 * X_{q^i}, X_{p_i}, X_κ on θ = dκ + ε p_i dq^i: the generic solve against the
 * historical formulas X_q = −∂p + ε q ∂κ, X_p = ∂q, X_κ = ε(κ ∂κ + p ∂p).
 */
std::vector<CoordinateFieldComparison> compare_tacs_coordinate_fields(int n, double epsilon, const ChartPoint & at);

// ---------------------------------------------------------------- integration

enum class Method { rk4, rk45 };

struct IntegrationOptions
{
  Method method{Method::rk45};
  double abs_tol{1e-9};
  double rel_tol{1e-9};
};

struct Trajectory
{
  std::vector<double> times;
  std::vector<ChartPoint> states;
  std::vector<double> hamiltonian_values;
  /// |dH/dt + H·R(H)| by centered differences; NaN at the two endpoints.
  std::vector<double> dissipation_residuals;
  bool complete{true};
  std::string diagnostic;
};

using VelocityField = std::function<Eigen::VectorXd(const ChartPoint &)>;
/// Expected rate term so that dH/dt + rate(x) = 0 along the flow (H·R(H) for X_H).
using DissipationRate = std::function<double(const ChartPoint &)>;

/// Samples at t_k = k·dt up to t_end. Stops early, with complete = false, if a guard is violated.
Trajectory integrate_field(const VelocityField & velocity, const ScalarField & H, const DissipationRate & rate,
                           const ChartPoint & x0, double t_end, double dt, const IntegrationOptions & options = {});

/// Flow of the generic X_H.
Trajectory integrate(const StructureSpec & s, const ScalarField & H, const ChartPoint & x0, double t_end, double dt,
                     const IntegrationOptions & options = {});

}  // namespace cosym
