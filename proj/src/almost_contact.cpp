#include "cosym/almost_contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "cosym/error.hpp"

namespace cosym {

namespace {

enum Slot { X = 0, Y = 1, Q = 2, P = 3, K = 4 };

struct Frame
{
  double x, y, q, p, tau, sigma, zeta, sd;
};

Frame frame(const ModelParameters & m, const ChartPoint & at)
{
  require_same_chart(*at.chart(), *extended_siegel_jacobi_chart(), "almost_contact");
  m.validate();
  Frame f{at[X], at[Y], at[Q], at[P], 0, 0, 0, std::sqrt(m.delta)};
  if (!(f.y > 0.0)) throw DomainError("almost_contact: y must be positive");
  f.tau = m.k / (f.y * f.y);
  f.sigma = 2.0 * m.nu;
  f.zeta = f.tau / f.sigma;
  return f;
}

// (u, s) = (Φ_xy, Φ_xq)
Eigen::Vector2d reduced_residual(const PhiFree & fr, double zeta, double u, double s)
{
  const double xx = -(u * (fr.yq + fr.yp) + s * (fr.pq + fr.qp)) / (2.0 * s);
  const double qq = (u * (fr.yp - fr.yq) + s * (fr.qp - fr.pq)) / (2.0 * s);
  const double yx = -(fr.yq * (u * fr.yp + s * fr.qp) + fr.yp * fr.pq * s) / (s * s);
  const double common = zeta * s * (fr.yq - fr.yp) + 1.0;
  return {xx * xx + common + u * yx, qq * qq + common + fr.qp * fr.pq};
}

}  // namespace

PhiTensor PhiTensor::assemble(const PhiFree & fr, double u, double s, const ModelParameters & m,
                              const ChartPoint & at)
{
  const Frame f = frame(m, at);
  if (s == 0.0) throw DegenerateStructure("PhiTensor: Φ_xq must be nonzero");
  PhiTensor t;
  t.tau = f.tau;
  t.sigma = f.sigma;
  t.zeta = f.zeta;
  const double z = f.zeta;
  const double xx = -(u * (fr.yq + fr.yp) + s * (fr.pq + fr.qp)) / (2.0 * s);
  const double qq = (u * (fr.yp - fr.yq) + s * (fr.qp - fr.pq)) / (2.0 * s);
  const double yx = -(fr.yq * (u * fr.yp + s * fr.qp) + fr.yp * fr.pq * s) / (s * s);
  Matrix5d & E = t.entries;
  E.setZero();
  E.row(X) << xx, u, s, s, 0;
  E.row(Y) << yx, -xx, fr.yq, fr.yp, 0;
  E.row(Q) << -z * fr.yp, z * s, qq, fr.qp, 0;
  E.row(P) << z * fr.yq, -z * s, fr.pq, -qq, 0;
  const Vector5d eta = xjt_contact_eta(m, at);
  for (int j = 0; j < 4; ++j)
    E(K, j) = -(eta[X] * E(X, j) + eta[Q] * E(Q, j) + eta[P] * E(P, j)) / f.sd;
  return t;
}

double AcmsSolution::residual(std::string_view name) const
{
  for (const auto & r : residuals)
    if (r.name == name) return r.value;
  throw Error("AcmsSolution: no residual named '" + std::string(name) + "'");
}

double AcmsSolution::max_residual() const
{
  double m = 0.0;
  for (const auto & r : residuals)
    if (r.name != "rank") m = std::max(m, r.value);
  return m;
}

Vector5d xjt_contact_eta(const ModelParameters & m, const ChartPoint & at)
{
  const Frame f = frame(m, at);
  Vector5d eta;
  eta << m.k / f.y, 0.0, -m.nu * f.p, m.nu * f.q, f.sd;
  return eta;
}

Matrix5d xjt_omega_hat(const ModelParameters & m, const ChartPoint & at)
{
  const Frame f = frame(m, at);
  Matrix5d W = Matrix5d::Zero();
  W(X, Y) = f.tau;
  W(Y, X) = -f.tau;
  W(Q, P) = f.sigma;
  W(P, Q) = -f.sigma;
  return W;
}

Matrix5d assemble_g_prime(const PhiTensor & phi, const ModelParameters & m, const ChartPoint & at)
{
  const Vector5d eta = xjt_contact_eta(m, at);
  return eta * eta.transpose() - xjt_omega_hat(m, at) * phi.entries;
}

Matrix5d g_prime_printed(const PhiTensor & phi, const ModelParameters & m, const ChartPoint & at)
{
  const Frame f = frame(m, at);
  const auto & F = phi.entries;
  const double k = m.k, nu = m.nu, t = f.tau, s = f.sigma;
  Matrix5d g = Matrix5d::Zero();
  g(X, X) = k * k / (f.y * f.y) - t * F(X, X);
  g(X, Y) = -t * F(Y, Y);
  g(X, Q) = -nu * k * f.p / f.y - t * F(Y, Q);
  g(X, P) = nu * k * f.q / f.y - t * F(Y, P);
  g(X, K) = k * f.sd / f.y;
  g(Y, Y) = t * F(X, Y);
  g(Y, Q) = t * F(X, Q);
  g(Y, P) = t * F(X, P);
  g(Q, Q) = nu * nu * f.p * f.p - s * F(P, Q);
  g(Q, P) = -nu * nu * f.p * f.q - s * F(Q, Q);
  g(Q, K) = -nu * f.sd * f.p;
  g(P, P) = nu * nu * f.q * f.q + s * F(Q, P);
  g(P, K) = nu * f.sd * f.q;
  g(K, K) = m.delta;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

AcmsSolution solve_phi(const PhiFree & fr, const ModelParameters & m, const ChartPoint & at)
{
  const Frame f = frame(m, at);
  auto F = [&](const Eigen::Vector2d & v) { return reduced_residual(fr, f.zeta, v[0], v[1]); };

  struct Root
  {
    Eigen::Vector2d v;
    double r;
  };
  std::vector<Root> roots;
  double best = std::numeric_limits<double>::infinity();
  int starts = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ++starts;
      Eigen::Vector2d v(-3.0 + 2.0 * a, -3.0 + 2.0 * b);
      Eigen::Vector2d r = F(v);
      for (int it = 0; it < 200 && r.norm() > 1e-14; ++it) {
        Eigen::Matrix2d J;
        for (int j = 0; j < 2; ++j) {
          Eigen::Vector2d e = Eigen::Vector2d::Zero();
          e[j] = fd_step(v[j]);
          J.col(j) = (F(v + e) - F(v - e)) / (2.0 * e[j]);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix2d> cod(J);
        cod.setThreshold(1e-12);
        const Eigen::Vector2d dv = -cod.solve(r);
        double lambda = 1.0;
        Eigen::Vector2d trial = v + dv, rt = F(trial);
        while (lambda > 1e-8 && !(rt.norm() < r.norm())) {
          lambda *= 0.5;
          trial = v + lambda * dv;
          rt = F(trial);
        }
        if (!(rt.norm() < r.norm())) break;
        v = trial;
        r = rt;
      }
      const double rn = r.norm();
      if (std::isfinite(rn)) best = std::min(best, rn);
      if (rn <= 1e-11 && std::abs(v[1]) > 1e-8 && std::abs(v[0]) > 1e-8) roots.push_back({v, rn});
    }
  }
  if (roots.empty())
    throw NumericalFailure("solve_phi: no start converged with Φ_xq, Φ_xy nonzero; best residual " +
                           std::to_string(best));

  auto build = [&](const Root & root) {
    AcmsSolution s;
    s.phi = PhiTensor::assemble(fr, root.v[0], root.v[1], m, at);
    s.xi = Vector5d::Zero();
    s.xi[K] = 1.0 / f.sd;
    s.eta = xjt_contact_eta(m, at);
    s.g_prime = assemble_g_prime(s.phi, m, at);
    Eigen::SelfAdjointEigenSolver<Matrix5d> es(0.5 * (s.g_prime + s.g_prime.transpose()));
    s.g_eigenvalues = es.eigenvalues();
    s.positive_definite = s.g_eigenvalues.minCoeff() > 0.0;
    s.starts = starts;
    s.converged = static_cast<int>(roots.size());

    const Matrix5d & E = s.phi.entries;
    const double z = s.phi.zeta;
    const double xx = E(X, X), xy = E(X, Y), xq = E(X, Q), xp = E(X, P), yx = E(Y, X);
    const double yq = E(Y, Q), yp = E(Y, P), qq = E(Q, Q), qp = E(Q, P), pq = E(P, Q);
    auto add = [&](std::string n, double v) { s.residuals.push_back({std::move(n), std::abs(v)}); };
    add("sq_xx", xx * xx + xy * yx + z * (xp * yq - xq * yp) + 1.0);
    add("sq_xq", xq * (xx + qq) + xy * yq + xp * pq);
    add("sq_xp", xp * (xx - qq) + xy * yp + xq * qp);
    add("sq_yq", yq * (qq - xx) + yx * xq + yp * pq);
    add("sq_yp", -yp * (xx + qq) + yx * xp + yq * qp);
    add("sq_qq", z * (xp * yq - yp * xq) + qq * qq + qp * pq + 1.0);
    add("eta_xi", s.eta.dot(s.xi) - 1.0);
    add("phi_xi", (E * s.xi).cwiseAbs().maxCoeff());
    add("eta_phi", (s.eta.transpose() * E).cwiseAbs().maxCoeff());
    add("phi_squared",
        (E * E + Matrix5d::Identity() - s.xi * s.eta.transpose()).cwiseAbs().maxCoeff());
    add("g_xi_eta", (s.g_prime * s.xi - s.eta).cwiseAbs().maxCoeff());
    add("omega_hat_xi", (xjt_omega_hat(m, at) * s.xi).cwiseAbs().maxCoeff());
    add("g_symmetry", (s.g_prime - s.g_prime.transpose()).cwiseAbs().maxCoeff());
    Eigen::FullPivLU<Matrix5d> lu(E);
    lu.setThreshold(1e-9);
    s.rank = static_cast<int>(lu.rank());
    add("rank", s.rank - 4);
    return s;
  };

  // prefer a positive-definite branch, otherwise the smallest residual
  std::optional<AcmsSolution> fallback;
  for (const Root & root : roots) {
    AcmsSolution s = build(root);
    if (s.positive_definite) return s;
    if (!fallback || s.max_residual() < fallback->max_residual()) fallback = std::move(s);
  }
  return *fallback;
}

double ppp_negative_witness(const ModelParameters & m, const ChartPoint & at)
{
  const double y = at["y"];
  if (!(y > 0.0)) throw DomainError("ppp_negative_witness: y must be positive");
  const ModelParameters inv = ModelParameters::from_kn(m.k, m.nu, m.delta, Parameterization::balanced);
  const ChartPoint pt(metric_chart(4), {at.chart()->find("x") ? at["x"] : 0.0, y, 0.0, 0.0, 0.0});
  const double g_xx = metric_matrix(4, inv, pt).entries(0, 0);
  const double tau = m.k / (y * y);
  return m.k * tau / (y * g_xx);
}

double potential_fit_residual(const AcmsSolution & s)
{
  const Eigen::Matrix4d h = (s.g_prime - s.eta * s.eta.transpose()).topLeftCorner<4, 4>();
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(1, 0) = 1.0;
  J(0, 1) = -1.0;
  J(3, 2) = 1.0;
  J(2, 3) = -1.0;
  const Eigen::Matrix4d herm = 0.5 * (h + J.transpose() * h * J);
  const double n = h.norm();
  return n > 0.0 ? (h - herm).norm() / n : 0.0;
}

double nijenhuis_n1(const MatrixFieldFn & phi, const VectorFieldFn & eta, const VectorFieldFn & xi,
                    const ChartPoint & at, NijenhuisConvention convention)
{
  const int d = at.chart()->dimension();
  const std::vector<double> x0(at.span().begin(), at.span().end());
  const Eigen::MatrixXd F = phi(x0);
  const Eigen::VectorXd Xi = xi(x0);
  if (F.rows() != d || F.cols() != d || Xi.size() != d) throw ChartMismatch("nijenhuis_n1: size mismatch");

  std::vector<Eigen::MatrixXd> dF(static_cast<std::size_t>(d));
  Eigen::MatrixXd dEta(d, d);  // dEta(a, j) = ∂a η_j
  for (int a = 0; a < d; ++a) {
    std::vector<double> xp = x0, xm = x0;
    const double h = fd_step(x0[static_cast<std::size_t>(a)]);
    xp[static_cast<std::size_t>(a)] += h;
    xm[static_cast<std::size_t>(a)] -= h;
    dF[static_cast<std::size_t>(a)] = (phi(xp) - phi(xm)) / (2.0 * h);
    dEta.row(a) = ((eta(xp) - eta(xm)) / (2.0 * h)).transpose();
  }
  const double factor = convention == NijenhuisConvention::factor2 ? 2.0 : 1.0;
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int c = 0; c < d; ++c) {
        double v = 0.0;
        for (int a = 0; a < d; ++a) {
          const auto & Da = dF[static_cast<std::size_t>(a)];
          v += F(a, i) * Da(c, j) - F(a, j) * Da(c, i);
        }
        const auto & Dj = dF[static_cast<std::size_t>(j)];
        const auto & Di = dF[static_cast<std::size_t>(i)];
        for (int b = 0; b < d; ++b) v += F(c, b) * (Dj(b, i) - Di(b, j));
        v += factor * (dEta(i, j) - dEta(j, i)) * Xi[c];
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

SasakiPotential::SasakiPotential(ScalarField k) : K(std::move(k))
{
  require_same_chart(*K.chart(), *heisenberg_chart(), "SasakiPotential");
  if (K.is_symbolic() && K.expression().depends_on(2))
    throw Error("SasakiPotential: K must not depend on kappa");
}

SasakiPotential SasakiPotential::heisenberg()
{
  return SasakiPotential(ScalarField::parse(heisenberg_chart(), "-y^2/2"));
}

double SasakiPotential::K_x(const ChartPoint & at) const { return K.derivative(0)(at); }
double SasakiPotential::K_y(const ChartPoint & at) const { return K.derivative(1)(at); }
double SasakiPotential::laplacian(const ChartPoint & at) const
{
  return K.derivative(0).derivative(0)(at) + K.derivative(1).derivative(1)(at);
}
double SasakiPotential::K_zzbar(const ChartPoint & at) const { return 0.25 * laplacian(at); }

SasakiData sasaki_from_potential(const SasakiPotential & pot, const ChartPoint & at, SasakiMetricForm form)
{
  require_same_chart(*at.chart(), *heisenberg_chart(), "sasaki_from_potential");
  const double kx = pot.K_x(at), ky = pot.K_y(at), lap = pot.laplacian(at);
  if (lap == 0.0) throw DegenerateStructure("sasaki_from_potential: K_{z zbar} vanishes");
  SasakiData d;
  d.xi << 0.0, 0.0, 1.0;
  d.eta << ky, -kx, 1.0;
  d.d_eta.setZero();
  d.d_eta(0, 1) = -lap;
  d.d_eta(1, 0) = lap;
  const double w = form == SasakiMetricForm::corrected ? -lap : 0.5 * lap;
  d.g = d.eta * d.eta.transpose();
  d.g(0, 0) += w;
  d.g(1, 1) += w;
  d.phi << 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, -kx, -ky, 0.0;
  return d;
}

SasakiAxioms sasaki_axioms(const SasakiData & d)
{
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d gphi = d.g * d.phi;
  SasakiAxioms a{};
  a.eta_xi = std::abs(d.eta.dot(d.xi) - 1.0);
  a.phi_xi = (d.phi * d.xi).cwiseAbs().maxCoeff();
  a.eta_phi = (d.eta.transpose() * d.phi).cwiseAbs().maxCoeff();
  a.phi_squared = (d.phi * d.phi + I - d.xi * d.eta.transpose()).cwiseAbs().maxCoeff();
  a.compatibility =
      (d.phi.transpose() * d.g * d.phi - d.g + d.eta * d.eta.transpose()).cwiseAbs().maxCoeff();
  a.eta_g_xi = (d.g * d.xi - d.eta).cwiseAbs().maxCoeff();
  a.g_phi_antisymmetry = (gphi + gphi.transpose()).cwiseAbs().maxCoeff();
  a.contact_metric = (d.d_eta - gphi).cwiseAbs().maxCoeff();
  return a;
}

}  // namespace cosym
