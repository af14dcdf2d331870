#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cosym/field.hpp"
#include "cosym/manifolds.hpp"

namespace cosym {

using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Vector5d = Eigen::Matrix<double, 5, 1>;

/// The four components left free by the Φ-tensor reduction on (x, y, q, p, κ).
struct PhiFree
{
  double yq{1.0};
  double yp{0.5};
  double qp{0.3};
  double pq{-0.2};
};

/**
 * (1,1)-tensor Φ on the extended Siegel-Jacobi chart; entries(i, j) = Φ^i_j
 * in the order (x, y, q, p, κ).
 */
struct PhiTensor
{
  Matrix5d entries{Matrix5d::Zero()};
  double tau{0.0};
  double sigma{0.0};
  double zeta{0.0};

  /// Fill the dependent entries from (Φ_xy, Φ_xq = Φ_xp) and the free block.
  static PhiTensor assemble(const PhiFree & free, double phi_xy, double phi_xq, const ModelParameters & m,
                            const ChartPoint & at);

  double operator()(int i, int j) const { return entries(i, j); }
};

struct NamedResidual
{
  std::string name;
  double value;
};

struct AcmsSolution
{
  PhiTensor phi;
  Vector5d xi;
  Vector5d eta;
  Matrix5d g_prime;
  std::vector<NamedResidual> residuals;
  Vector5d g_eigenvalues;
  bool positive_definite{false};
  int rank{0};
  /// Seeds tried and seeds that converged.
  int starts{0};
  int converged{0};

  double residual(std::string_view name) const;
  /// Largest value across all residual families except "rank".
  double max_residual() const;
};

/// η coefficients (k/y, 0, −νp, νq, √δ) at a point of the extended Siegel-Jacobi chart.
Vector5d xjt_contact_eta(const ModelParameters & m, const ChartPoint & at);

/// τ ↦ (x,y) block, σ ↦ (q,p) block: the antisymmetric matrix of ω.
Matrix5d xjt_omega_hat(const ModelParameters & m, const ChartPoint & at);

/// g′ = η⊗η − Φ̂Φ.
Matrix5d assemble_g_prime(const PhiTensor & phi, const ModelParameters & m, const ChartPoint & at);

/// g′ as printed in closed form; differs from the assembly in the (x,x) and (q,p) entries.
Matrix5d g_prime_printed(const PhiTensor & phi, const ModelParameters & m, const ChartPoint & at);

/// Damped Gauss-Newton over (Φ_xy, Φ_xq) from a 4×4 grid in [−3,3]². Throws NumericalFailure
/// when no start converges or the converged branch has Φ_xq = 0 or Φ_xy = 0.
AcmsSolution solve_phi(const PhiFree & free, const ModelParameters & m, const ChartPoint & at);

/// k·τ/(y·g_xx) for the invariant metric with α = k/2; equals 2k/y.
double ppp_negative_witness(const ModelParameters & m, const ChartPoint & at);

/// Relative distance of the (x,y,q,p) block of g′ − η⊗η from its J₀-Hermitian part,
/// with J₀ the complex structure of z1 = x + iy, z2 = q + ip.
double potential_fit_residual(const AcmsSolution & s);

enum class NijenhuisConvention { factor2, factor1 };

using MatrixFieldFn = std::function<Eigen::MatrixXd(std::span<const double>)>;
using VectorFieldFn = std::function<Eigen::VectorXd(std::span<const double>)>;

/// max |N¹(∂i, ∂j)^c| with N¹ = [Φ,Φ] + f·dη⊗ξ, dη(∂i,∂j) = ∂iη_j − ∂jη_i and f = 2 or 1.
/// Derivatives of Φ and η are central differences.
double nijenhuis_n1(const MatrixFieldFn & phi, const VectorFieldFn & eta, const VectorFieldFn & xi,
                    const ChartPoint & at, NijenhuisConvention convention);

/// κ-independent potential K(x, y) on the chart (x, y, kappa).
struct SasakiPotential
{
  ScalarField K;

  explicit SasakiPotential(ScalarField k);
  static SasakiPotential heisenberg();

  double K_x(const ChartPoint & at) const;
  double K_y(const ChartPoint & at) const;
  double laplacian(const ChartPoint & at) const;
  /// ∂²K/∂z∂z̄ = ΔK / 4.
  double K_zzbar(const ChartPoint & at) const;
};

enum class SasakiMetricForm { corrected, printed };

struct SasakiData
{
  Eigen::Vector3d xi;
  Eigen::Vector3d eta;
  Eigen::Matrix3d d_eta;
  Eigen::Matrix3d g;
  Eigen::Matrix3d phi;
};

/// Real split of the potential construction; `corrected` uses g = η⊗η − ΔK(dx² + dy²),
/// `printed` the η⊗η + ½ΔK(dx² + dy²) variant. Throws DegenerateStructure if ΔK = 0.
SasakiData sasaki_from_potential(const SasakiPotential & K, const ChartPoint & at,
                                 SasakiMetricForm form = SasakiMetricForm::corrected);

struct SasakiAxioms
{
  double eta_xi;
  double phi_xi;
  double eta_phi;
  double phi_squared;
  double compatibility;
  double eta_g_xi;
  double g_phi_antisymmetry;
  double contact_metric;
};

/// Axiom residuals of an almost contact metric quadruple; contact_metric is |dη − gΦ|.
SasakiAxioms sasaki_axioms(const SasakiData & d);

}  // namespace cosym
