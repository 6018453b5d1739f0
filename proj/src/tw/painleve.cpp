#include <array>
#include <cmath>
#include <fstream>

#include <boost/numeric/odeint.hpp>

#include "kpzlab/error.hpp"
#include "kpzlab/tracy_widom.hpp"

namespace kpz::tw {

namespace {

using State = std::array<double, 4>;  // q, q', u, v

struct BlowUp {};

// Tail integrals of Ai^2 above s, used for the starting values and above the grid.
void airy_tails(double s, double& u, double& v) {
  AiryEval a = airy(s);
  u = a.aip * a.aip - s * a.ai * a.ai;
  v = (2.0 / 3.0) * s * s * a.ai * a.ai - (2.0 / 3.0) * s * a.aip * a.aip - a.ai * a.aip / 3.0;
}

}  // namespace

double PainleveSolution::max_residual() const {
  double worst = 0.0;
  const double h = step;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    double qpp = (-q[i + 2] + 16.0 * q[i + 1] - 30.0 * q[i] + 16.0 * q[i - 1] - q[i - 2]) / (12.0 * h * h);
    worst = std::max(worst, std::abs(qpp - s[i] * q[i] - 2.0 * q[i] * q[i] * q[i]));
  }
  return worst;
}

PainleveSolution hastings_mcleod(const PainleveOptions& options) {
  namespace odeint = boost::numeric::odeint;
  require(options.s_min < options.s_max && options.step > 0.0, Errc::invalid_argument, "bad Painleve grid");
  const auto intervals = static_cast<std::size_t>(std::llround((options.s_max - options.s_min) / options.step));
  require(std::abs(options.s_min + static_cast<double>(intervals) * options.step - options.s_max) < 1e-9,
          Errc::invalid_argument, "grid step must divide the interval");

  std::vector<double> times(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) times[i] = options.s_max - static_cast<double>(i) * options.step;

  AiryEval a = airy(options.s_max);
  State x{a.ai + options.perturbation, a.aip, 0.0, 0.0};
  airy_tails(options.s_max, x[2], x[3]);

  const double bound = options.blow_up;
  auto rhs = [bound](const State& y, State& dy, double s) {
    if (!(std::abs(y[0]) <= bound)) throw BlowUp{};
    dy[0] = y[1];
    dy[1] = s * y[0] + 2.0 * y[0] * y[0] * y[0];
    dy[2] = -y[0] * y[0];
    dy[3] = -y[2];
  };

  PainleveSolution sol;
  sol.step = options.step;
  std::vector<State> states;
  states.reserve(intervals + 1);
  auto stepper = odeint::make_controlled(options.tolerance, options.tolerance,
                                         odeint::runge_kutta_fehlberg78<State>());
  try {
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), -options.step / 8.0,
                            [&](const State& y, double) {
                              if (!(std::abs(y[0]) <= bound)) throw BlowUp{};
                              states.push_back(y);
                            });
  } catch (const BlowUp&) {
    fail(Errc::blow_up, "Painleve solution exceeded the blow-up bound; initial data off the separatrix");
  } catch (const odeint::step_adjustment_error&) {
    fail(Errc::blow_up, "Painleve integrator failed to control the step; solution is singular");
  }
  require(states.size() == intervals + 1, Errc::no_convergence, "Painleve integration ended early");
  // store ascending in s
  for (std::size_t i = 0; i <= intervals; ++i) {
    const State& y = states[intervals - i];
    sol.s.push_back(times[intervals - i]);
    sol.q.push_back(y[0]);
    sol.qp.push_back(y[1]);
    sol.u.push_back(y[2]);
    sol.v.push_back(y[3]);
  }
  return sol;
}

namespace {

// Hermite interpolation of v with v' = -u on the grid cell containing s.
double interp_v(const PainleveSolution& sol, double s) {
  const double h = sol.step;
  auto i = static_cast<std::size_t>(std::floor((s - sol.s.front()) / h));
  if (i + 1 >= sol.size()) i = sol.size() - 2;
  double t = (s - sol.s[i]) / h;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * sol.v[i] + h10 * h * (-sol.u[i]) + h01 * sol.v[i + 1] + h11 * h * (-sol.u[i + 1]);
}

double interp_u(const PainleveSolution& sol, double s) {
  const double h = sol.step;
  auto i = static_cast<std::size_t>(std::floor((s - sol.s.front()) / h));
  if (i + 1 >= sol.size()) i = sol.size() - 2;
  double t = (s - sol.s[i]) / h;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  // u' = -q^2
  return h00 * sol.u[i] + h10 * h * (-sol.q[i] * sol.q[i]) + h01 * sol.u[i + 1] +
         h11 * h * (-sol.q[i + 1] * sol.q[i + 1]);
}

}  // namespace

double f2_cdf(const PainleveSolution& sol, double s) {
  require(sol.size() >= 2, Errc::grid_coverage, "empty Painleve solution");
  require(s >= sol.s.front(), Errc::grid_coverage, "F2 requested below the solution grid");
  if (s > sol.s.back()) {
    if (s > 12.0) return 1.0;
    double u, v;
    airy_tails(s, u, v);
    return std::exp(-v);
  }
  return std::exp(-interp_v(sol, s));
}

double f2_pdf(const PainleveSolution& sol, double s) {
  require(sol.size() >= 2, Errc::grid_coverage, "empty Painleve solution");
  require(s >= sol.s.front(), Errc::grid_coverage, "F2 density requested below the solution grid");
  if (s > sol.s.back()) {
    if (s > 12.0) return 0.0;
    double u, v;
    airy_tails(s, u, v);
    return u * std::exp(-v);
  }
  return interp_u(sol, s) * std::exp(-interp_v(sol, s));
}

Moments f2_moments(const PainleveSolution& sol) {
  const std::size_t n = sol.size();
  require(n >= 3 && (n - 1) % 2 == 0, Errc::grid_coverage, "Simpson needs an even number of intervals");
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double pdf = sol.u[i] * std::exp(-sol.v[i]);
    m0 += w * pdf;
    m1 += w * pdf * sol.s[i];
    m2 += w * pdf * sol.s[i] * sol.s[i];
  }
  const double c = sol.step / 3.0;
  m0 *= c;
  m1 *= c;
  m2 *= c;
  Moments m;
  m.mass = m0;
  m.mean = m1 / m0;
  m.variance = m2 / m0 - m.mean * m.mean;
  m.std = std::sqrt(m.variance);
  return m;
}

TracyWidom::TracyWidom(const PainleveOptions& options) : sol_(hastings_mcleod(options)), moments_(f2_moments(sol_)) {}

double TracyWidom::cdf(double s) const {
  if (s < sol_.s.front()) return 0.0;
  return f2_cdf(sol_, s);
}

double TracyWidom::pdf(double s) const {
  if (s < sol_.s.front()) return 0.0;
  return f2_pdf(sol_, s);
}

void TracyWidom::write_table(const std::string& path) const {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::io, "cannot open " + path);
  out.precision(17);
  out << "s,q,F2,pdf\n";
  for (std::size_t i = 0; i < sol_.size(); ++i) {
    double f = std::exp(-sol_.v[i]);
    out << sol_.s[i] << ',' << sol_.q[i] << ',' << f << ',' << sol_.u[i] * f << '\n';
  }
  require(static_cast<bool>(out), Errc::io, "write failed for " + path);
}

const TracyWidom& default_tracy_widom() {
  static const TracyWidom instance;
  return instance;
}

}  // namespace kpz::tw
