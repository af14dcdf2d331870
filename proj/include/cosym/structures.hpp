#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cosym/forms.hpp"

namespace cosym {

/**
 * Almost cosymplectic data (θ, Ω) on a (2n+1)-dimensional chart. The
 * exterior derivatives dθ and dΩ are built once at construction.
 */
class StructureSpec
{
public:
  StructureSpec(std::string name, KForm theta, KForm omega, Parameters parameters = {});

  const std::string & name() const noexcept { return name_; }
  const ChartRef & chart() const noexcept { return theta_.chart(); }
  const KForm & theta() const noexcept { return theta_; }
  const KForm & omega() const noexcept { return omega_; }
  const KForm & dtheta() const noexcept { return dtheta_; }
  const KForm & domega() const noexcept { return domega_; }
  const Parameters & parameters() const noexcept { return parameters_; }
  int n() const noexcept { return n_; }
  int dimension() const noexcept { return 2 * n_ + 1; }

  /// Top coefficient of θ ∧ Ωⁿ at a point.
  double volume(const ChartPoint & at) const;
  /// Top coefficient of θ ∧ (dθ)ⁿ at a point.
  double contact_volume(const ChartPoint & at) const;

private:
  std::string name_;
  KForm theta_;
  KForm omega_;
  KForm dtheta_;
  KForm domega_;
  Parameters parameters_;
  int n_;
};

struct StructureClass
{
  bool acos{false};
  bool gtacos{false};
  bool cos{false};
  bool contact{false};
  bool tacs{false};
  std::optional<double> tacs_epsilon;
};

/// Flags hold iff their identities hold at every probe within `tol`.
StructureClass classify(const StructureSpec & s, const std::vector<ChartPoint> & probes, double tol = 1e-9);

/// Darboux chart (q1..qn, p1..pn, kappa); for n = 1 the names are (q, p, kappa).
ChartRef darboux_chart(int n);

/// Slots of (q^i, p_i, κ) on a chart using the Darboux naming.
struct DarbouxLayout
{
  std::vector<int> q;
  std::vector<int> p;
  int kappa{-1};

  int n() const noexcept { return static_cast<int>(q.size()); }
  /// Throws ChartMismatch unless the chart follows darboux_chart naming.
  static DarbouxLayout from_chart(const Chart & chart);
};

/// θ = a_i dq^i + b_i dp_i + c dκ on the Darboux chart, with Ω = Σ dq^i ∧ dp_i.
struct CanonicalThetaSpec
{
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double c{1.0};

  int n() const noexcept { return static_cast<int>(a.size()); }
  StructureSpec structure(const std::string & name = "canonical_theta") const;
};

Eigen::MatrixXd omega_matrix(const StructureSpec & s, const ChartPoint & at);
/// Matrix F with X♭ = F X, i.e. Ωᵀ + θθᵀ in coefficient form.
Eigen::MatrixXd flat_matrix(const StructureSpec & s, const ChartPoint & at);

/// Solves R⌟Ω = 0, R⌟θ = 1 as a stacked least-squares system with a rank check.
Eigen::VectorXd reeb(const StructureSpec & s, const ChartPoint & at);
Eigen::VectorXd flat(const StructureSpec & s, const Eigen::VectorXd & X, const ChartPoint & at);
Eigen::VectorXd sharp(const StructureSpec & s, const Eigen::VectorXd & alpha, const ChartPoint & at);

}  // namespace cosym
