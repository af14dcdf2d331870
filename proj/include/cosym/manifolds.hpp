#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cosym/structures.hpp"

namespace cosym {

/// How (α, γ) follow from (k, ν): α = k/2, γ = ν, or the square-root variant α = √k/2, γ = √ν.
enum class Parameterization { balanced, sqrt };

struct ModelParameters
{
  double k{1.0};
  double nu{1.0};
  double delta{1.0};
  double alpha{0.5};
  double beta{0.0};
  double gamma{1.0};

  static ModelParameters from_kn(double k, double nu, double delta,
                                 Parameterization p = Parameterization::balanced, double beta = 0.0);
  /// Throws Error unless k, ν, δ > 0 and α, β, γ ≥ 0.
  void validate() const;
  /// {k, nu, delta} for expression parsing.
  Parameters table() const;
};

/// (x, y, q, p, kappa), y > 0.
ChartRef extended_siegel_jacobi_chart();
/// (x, y, q, p), y > 0.
ChartRef siegel_jacobi_chart();
/// (x, y, kappa).
ChartRef heisenberg_chart();
/// (x, y, theta_ang, p, q, kappa), y > 0.
ChartRef group_chart();
/// Chart matching metric case 1..5: (x,y), (x,y,theta_ang), (x,y,p,q), (x,y,p,q,kappa), group chart.
ChartRef metric_chart(int metric_case);
/// Real-split Siegel-Jacobi disk (w1, w2, z1, z2) with |w| < 1.
ChartRef siegel_jacobi_disk_chart();

StructureSpec darboux_contact(int n);
StructureSpec darboux_cosymplectic(int n);
StructureSpec heisenberg();
StructureSpec xjt_gtacos(const ModelParameters & m);
StructureSpec xjt_contact(const ModelParameters & m);

/// Accepts "darboux_contact", "darboux_contact(2)", "heisenberg", "xjt_gtacos", ...
StructureSpec builtin(std::string_view name, const ModelParameters & m = {});

struct CatalogEntry
{
  std::string name;
  std::string description;
};
std::vector<CatalogEntry> builtin_catalog();

struct MetricMatrix
{
  Eigen::MatrixXd entries;
  ChartPoint point;
};

/// Left-invariant metric of the given case in the coordinate order of `at`'s chart.
MetricMatrix metric_matrix(int metric_case, const ModelParameters & m, const ChartPoint & at);

/// λ1..λ6 as covectors in group-chart order (x, y, theta_ang, p, q, kappa).
std::array<Eigen::VectorXd, 6> invariant_one_forms(const ModelParameters & m, const ChartPoint & at);

/// (x,y,q,p) -> (w1,w2,z1,z2); opaque complex evaluation, finite-difference Jacobian.
ChartMap cayley_map(const ModelParameters & m);
/// Invariant Kähler two-form on the disk chart, split into real components.
KForm disk_kahler_form(const ModelParameters & m);

/// (x,y,q,p,κ) -> Darboux (q1,q2,p1,p2,κ): q1 = kx, p1 = −1/y, q2 = 2νq, p2 = p.
ChartMap darboux_identification(const ModelParameters & m);

}  // namespace cosym
