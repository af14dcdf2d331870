#include <cmath>
#include <limits>
#include <vector>

#include <boost/numeric/odeint/integrate/integrate_times.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <boost/numeric/odeint/util/odeint_error.hpp>

#include "cosym/dynamics.hpp"
#include "cosym/error.hpp"

namespace cosym {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

struct Escape
{
  std::string what;
};

Eigen::Map<const Eigen::VectorXd> as_vector(const State & x)
{
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

std::vector<double> sample_times(double t_end, double dt)
{
  std::vector<double> t{0.0};
  if (t_end <= 0.0) return t;
  const auto steps = static_cast<long>(std::floor(t_end / dt * (1.0 + 1e-12)));
  for (long k = 1; k <= steps; ++k) t.push_back(static_cast<double>(k) * dt);
  if (t_end - t.back() > 1e-12 * std::max(1.0, t_end)) t.push_back(t_end);
  return t;
}

}  // namespace

Trajectory integrate_field(const VelocityField & velocity, const ScalarField & H, const DissipationRate & rate,
                           const ChartPoint & x0, double t_end, double dt, const IntegrationOptions & options)
{
  if (!(dt > 0.0)) throw Error("integrate: dt must be positive");
  if (t_end < 0.0) throw Error("integrate: t_end must be nonnegative");
  const ChartRef chart = x0.chart();

  Trajectory traj;
  auto system = [&](const State & x, State & dxdt, double) {
    if (!chart->contains(x)) throw Escape{"stage left the chart domain"};
    const Eigen::VectorXd v = velocity(ChartPoint(chart, as_vector(x)));
    dxdt.assign(v.data(), v.data() + v.size());
  };
  auto observer = [&](const State & x, double t) {
    for (double xi : x)
      if (!std::isfinite(xi)) throw Escape{"state became non-finite"};
    if (!chart->contains(x)) throw Escape{"state left the chart domain"};
    ChartPoint p(chart, as_vector(x));
    traj.times.push_back(t);
    traj.hamiltonian_values.push_back(H(p));
    traj.states.push_back(std::move(p));
  };

  const std::vector<double> times = sample_times(t_end, dt);
  State x(x0.values().data(), x0.values().data() + x0.values().size());
  try {
    if (times.size() == 1) {
      observer(x, 0.0);
    } else if (options.method == Method::rk4) {
      odeint::integrate_times(odeint::runge_kutta4<State>(), system, x, times.begin(), times.end(), dt, observer);
    } else {
      auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt, observer,
                              odeint::max_step_checker(1000000));
    }
  } catch (const Escape & e) {
    traj.complete = false;
    traj.diagnostic = e.what + " after t = " + (traj.times.empty() ? std::string("0") : std::to_string(traj.times.back()));
  } catch (const DomainError & e) {
    traj.complete = false;
    traj.diagnostic = e.what();
  } catch (const odeint::odeint_error & e) {
    traj.complete = false;
    traj.diagnostic = std::string("step size underflow: ") + e.what();
  }

  const std::size_t m = traj.times.size();
  traj.dissipation_residuals.assign(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double dHdt = (traj.hamiltonian_values[k + 1] - traj.hamiltonian_values[k - 1]) /
                        (traj.times[k + 1] - traj.times[k - 1]);
    traj.dissipation_residuals[k] = std::abs(dHdt + (rate ? rate(traj.states[k]) : 0.0));
  }
  return traj;
}

Trajectory integrate(const StructureSpec & s, const ScalarField & H, const ChartPoint & x0, double t_end, double dt,
                     const IntegrationOptions & options)
{
  require_same_chart(*x0.chart(), *s.chart(), "integrate");
  require_same_chart(*H.chart(), *s.chart(), "integrate");
  auto velocity = [&](const ChartPoint & p) { return hamiltonian_field_generic(s, H, p); };
  auto rate = [&](const ChartPoint & p) { return H(p) * reeb_derivative(s, H, p); };
  return integrate_field(velocity, H, rate, x0, t_end, dt, options);
}

}  // namespace cosym
