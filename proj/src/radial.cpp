#include "trilayer/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include <boost/numeric/odeint.hpp>

namespace trilayer {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 3>;  // u, u', running growth integral

constexpr double kCenterSeriesFactor = 1e-6;
constexpr double kLocateRelTol = 1e-13;
constexpr double kHitRelTol = 1e-12;
constexpr long kMaxSteps = 10'000'000;

class System {
 public:
  explicit System(const RadialRhs& rhs) : rhs_(rhs) {}

  void operator()(const State& x, State& dx, double r) const {
    dx[0] = x[1];
    dx[1] = rhs_.consumption(x[0]) - 2.0 * x[1] / r;
    dx[2] = rhs_.growth ? rhs_.growth(x[0]) * r * r : 0.0;
  }

  double second_derivative(const State& x, double r) const {
    if (r == 0.0) return rhs_.consumption(x[0]) / 3.0;
    return rhs_.consumption(x[0]) - 2.0 * x[1] / r;
  }

  double growth(double u) const { return rhs_.growth ? rhs_.growth(u) : 0.0; }

 private:
  const RadialRhs& rhs_;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class ArcBuilder {
 public:
  ArcBuilder(const System& sys, RadialSolution& sol) : sys_(sys), sol_(sol) {}

  void push(double r, const State& x) {
    sol_.r.push_back(r);
    sol_.u.push_back(x[0]);
    sol_.du.push_back(x[1]);
    sol_.d2u.push_back(sys_.second_derivative(x, r));
    sol_.growth.push_back(x[2]);
  }

  void finish(StopReason reason) {
    sol_.stop_reason = reason;
    sol_.stop_value = sol_.u.back();
    sol_.stop_radius = sol_.r.back();
    sol_.growth_integral = sol_.growth.back();
  }

 private:
  const System& sys_;
  RadialSolution& sol_;
};

// One explicit dopri5 step of size dt from (r, x) without error control.
State exact_step(const System& sys, double r, const State& x, double dt) {
  odeint::runge_kutta_dopri5<State> stepper;
  State dxdt{}, out{}, dxdt_out{};
  sys(x, dxdt, r);
  stepper.do_step(sys, x, dxdt, r, out, dxdt_out, dt);
  return out;
}

double length_scale(const RadialRhs& rhs, double u0) {
  const double h = rhs.consumption(u0);
  if (h > 0 && u0 > 0) return std::sqrt(u0 / h);
  return 1.0;
}

}  // namespace

RadialSolution integrate_radial(const RadialRhs& rhs, double r0, double u0, double du0,
                                const StopCondition& stop, const IntegratorTolerances& tol) {
  if (!rhs.consumption) throw Error(Errc::InvalidArgument, "missing consumption rate");
  if (!std::isfinite(r0) || !std::isfinite(u0) || !std::isfinite(du0) || !std::isfinite(stop.target)) {
    throw Error(Errc::NonFinite, "non-finite radial start or target");
  }
  if (r0 < 0) throw Error(Errc::InvalidArgument, "start radius must be >= 0, got " + num(r0));
  if (!(u0 > 0)) throw Error(Errc::InvalidArgument, "start value must be > 0, got " + num(u0));
  if (du0 < 0) throw Error(Errc::InvalidArgument, "start slope must be >= 0, got " + num(du0));
  if (r0 == 0.0 && du0 != 0.0) {
    throw Error(Errc::InvalidArgument, "a start at the center requires zero slope");
  }

  const bool until_value = stop.mode == StopCondition::Mode::UntilValue;
  const double ell = length_scale(rhs, u0);
  double cap = 0.0;
  if (until_value) {
    if (!(stop.target > u0)) {
      throw Error(Errc::NonMonotoneTarget,
                  "target " + num(stop.target) + " is not above the start value " + num(u0));
    }
    cap = stop.cap ? *stop.cap
                   : r0 + 1e3 * std::max(1.0, ell * (1.0 + std::log(stop.target / u0)));
  } else {
    if (stop.target < r0) {
      throw Error(Errc::InvalidArgument,
                  "target radius " + num(stop.target) + " is below the start " + num(r0));
    }
    cap = stop.target;
  }

  const System sys(rhs);
  RadialSolution sol;
  ArcBuilder arc(sys, sol);

  double r = r0;
  State x{u0, du0, 0.0};
  arc.push(r, x);

  if (!until_value && stop.target == r0) {
    arc.finish(StopReason::ReachedRadius);
    return sol;
  }

  if (r0 == 0.0) {
    // Regular center: u = u0 + h(u0) r^2/6, u' = h(u0) r/3.
    const double h0 = rhs.consumption(u0);
    double delta = kCenterSeriesFactor * std::max(1.0, ell);
    StopReason series_stop = StopReason::ReachedRadius;
    if (!until_value && stop.target <= delta) {
      delta = stop.target;
    } else if (until_value && h0 > 0 && u0 + h0 * delta * delta / 6.0 >= stop.target) {
      delta = std::sqrt(6.0 * (stop.target - u0) / h0);
      series_stop = StopReason::HitThreshold;
    }
    x = {u0 + h0 * delta * delta / 6.0, h0 * delta / 3.0, sys.growth(u0) * delta * delta * delta / 3.0};
    r = delta;
    if (series_stop == StopReason::HitThreshold) x[0] = stop.target;
    arc.push(r, x);
    if (series_stop == StopReason::HitThreshold || (!until_value && r >= stop.target)) {
      arc.finish(series_stop);
      return sol;
    }
  }

  auto stepper = odeint::make_dense_output(tol.atol, tol.rtol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = until_value ? 1e-2 * ell : std::min(1e-2 * ell, 0.5 * (stop.target - r));
  stepper.initialize(x, r, dt0);

  for (long step = 0; step < kMaxSteps; ++step) {
    const auto [t0, t1] = stepper.do_step(sys);
    const State x0 = stepper.previous_state();
    const State& x1 = stepper.current_state();

    if (until_value && x1[0] >= stop.target) {
      double lo = t0, hi = t1;
      State probe{};
      while (hi - lo > kLocateRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, probe);
        (probe[0] < stop.target ? lo : hi) = mid;
      }
      double r_hit = hi;
      State xh = exact_step(sys, t0, x0, r_hit - t0);
      for (int k = 0; k < 8 && std::abs(xh[0] - stop.target) > 0.1 * kHitRelTol * stop.target; ++k) {
        r_hit += (stop.target - xh[0]) / xh[1];
        xh = exact_step(sys, t0, x0, r_hit - t0);
      }
      if (std::abs(xh[0] - stop.target) <= kHitRelTol * stop.target) xh[0] = stop.target;
      arc.push(r_hit, xh);
      arc.finish(StopReason::HitThreshold);
      return sol;
    }
    if (!until_value && t1 >= stop.target) {
      const State xe = t1 == stop.target ? x1 : exact_step(sys, t0, x0, stop.target - t0);
      arc.push(stop.target, xe);
      arc.finish(StopReason::ReachedRadius);
      return sol;
    }
    if (until_value && t1 >= cap) {
      throw Error(Errc::CapExceeded, "radius cap " + num(cap) + " reached before u = " +
                                         num(stop.target) + " (u = " + num(x1[0]) + ")");
    }
    if (!std::isfinite(x1[0])) throw Error(Errc::NonFinite, "radial solution diverged at r = " + num(t1));
    arc.push(t1, x1);
  }
  throw Error(Errc::CapExceeded, "step budget exhausted");
}

namespace {

std::size_t locate(const RadialSolution& sol, double r) {
  const double slack = 1e-12 * std::max(1.0, std::abs(sol.r.back()));
  if (sol.r.empty() || r < sol.r.front() - slack || r > sol.r.back() + slack) {
    throw Error(Errc::OutOfRange, "r = " + num(r) + " outside the arc [" + num(sol.r.front()) + ", " +
                                      num(sol.r.back()) + "]");
  }
  if (sol.r.size() == 1) return 0;
  auto it = std::upper_bound(sol.r.begin(), sol.r.end(), r);
  std::size_t i = it == sol.r.begin() ? 0 : static_cast<std::size_t>(it - sol.r.begin()) - 1;
  return std::min(i, sol.r.size() - 2);
}

// Quintic Hermite interpolation of u on one grid interval from (u, u', u'')
// at both ends. Returns {u(r), u'(r)}.
std::pair<double, double> quintic(const RadialSolution& sol, std::size_t i, double r) {
  const double h = sol.r[i + 1] - sol.r[i];
  const double t = std::clamp((r - sol.r[i]) / h, 0.0, 1.0);
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double y0 = sol.u[i], y1 = sol.u[i + 1];
  const double m0 = h * sol.du[i], m1 = h * sol.du[i + 1];
  const double a0 = h * h * sol.d2u[i], a1 = h * h * sol.d2u[i + 1];
  const double value = (1 - 10 * t3 + 15 * t4 - 6 * t5) * y0 + (t - 6 * t3 + 8 * t4 - 3 * t5) * m0 +
                       (0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5) * a0 + (0.5 * t3 - t4 + 0.5 * t5) * a1 +
                       (-4 * t3 + 7 * t4 - 3 * t5) * m1 + (10 * t3 - 15 * t4 + 6 * t5) * y1;
  const double slope = ((-30 * t2 + 60 * t3 - 30 * t4) * y0 + (1 - 18 * t2 + 32 * t3 - 15 * t4) * m0 +
                        (t - 4.5 * t2 + 6 * t3 - 2.5 * t4) * a0 + (1.5 * t2 - 4 * t3 + 2.5 * t4) * a1 +
                        (-12 * t2 + 28 * t3 - 15 * t4) * m1 + (30 * t2 - 60 * t3 + 30 * t4) * y1) /
                       h;
  return {value, slope};
}

}  // namespace

double value_at(const RadialSolution& sol, double r) {
  const std::size_t i = locate(sol, r);
  if (sol.r.size() == 1) return sol.u[0];
  if (r == sol.r[i]) return sol.u[i];
  if (r == sol.r[i + 1]) return sol.u[i + 1];
  return quintic(sol, i, r).first;
}

double flux_at(const RadialSolution& sol, double r) {
  const std::size_t i = locate(sol, r);
  if (sol.r.size() == 1) return sol.du[0];
  if (r == sol.r[i]) return sol.du[i];
  if (r == sol.r[i + 1]) return sol.du[i + 1];
  return std::max(quintic(sol, i, r).second, 0.0);
}

double closed_form_linear_center(double lambda, double u0, double r) {
  const double x = std::sqrt(lambda) * r;
  if (x < 1e-4) return u0 * (1.0 + x * x / 6.0 + x * x * x * x / 120.0);
  return u0 * std::sinh(x) / x;
}

double closed_form_linear_center_slope(double lambda, double u0, double r) {
  const double k = std::sqrt(lambda);
  const double x = k * r;
  if (x < 1e-4) return u0 * k * x / 3.0 * (1.0 + x * x / 10.0);
  return u0 * (x * std::cosh(x) - std::sinh(x)) / (k * r * r);
}

double closed_form_linear_annulus(double lambda, double rho, double u0, double r) {
  const double k = std::sqrt(lambda);
  const double d = k * (r - rho);
  return u0 * (rho * std::cosh(d) + std::sinh(d) / k) / r;
}

double closed_form_linear_annulus_slope(double lambda, double rho, double u0, double r) {
  const double k = std::sqrt(lambda);
  const double d = k * (r - rho);
  const double n = rho * std::cosh(d) + std::sinh(d) / k;
  const double dn = rho * k * std::sinh(d) + std::cosh(d);
  return u0 * (dn / r - n / (r * r));
}

}  // namespace trilayer
