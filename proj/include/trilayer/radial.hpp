#pragma once

#include <optional>
#include <vector>

#include "trilayer/model.hpp"

namespace trilayer {

/// Right-hand side of u'' + (2/r) u' = consumption(u). The optional growth
/// rate is accumulated as w' = growth(u) r^2 alongside the solution.
struct RadialRhs {
  ScalarFn consumption;
  ScalarFn growth;  // may be empty
};

struct StopCondition {
  enum class Mode { UntilValue, UntilRadius };

  Mode mode = Mode::UntilRadius;
  double target = 0.0;
  std::optional<double> cap;  ///< hard radius cap for UntilValue

  static StopCondition until_value(double value, std::optional<double> cap = std::nullopt) {
    return {Mode::UntilValue, value, cap};
  }
  static StopCondition until_radius(double radius) { return {Mode::UntilRadius, radius, std::nullopt}; }
};

struct IntegratorTolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
};

enum class StopReason { HitThreshold, ReachedRadius };

/// A solved arc. All vectors share the grid `r`; `growth[i]` is the running
/// integral of growth(u) r^2 from r.front() to r[i].
struct RadialSolution {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> d2u;
  std::vector<double> growth;
  double growth_integral = 0.0;
  StopReason stop_reason = StopReason::ReachedRadius;
  double stop_value = 0.0;   ///< u at the final grid point
  double stop_radius = 0.0;  ///< final grid radius

  double start() const { return r.front(); }
  double end() const { return r.back(); }
};

/// Integrates the radial Cauchy problem outward from r0 with u(r0) = u0,
/// u'(r0) = du0. A start at r0 = 0 requires du0 = 0 and takes the first
/// step from the regular-center series.
///
/// UntilValue stops where u reaches the target (|u - target| <= 1e-12
/// target); UntilRadius stops exactly at the target radius. Throws
/// NonMonotoneTarget, CapExceeded or InvalidArgument.
RadialSolution integrate_radial(const RadialRhs& rhs, double r0, double u0, double du0,
                                const StopCondition& stop, const IntegratorTolerances& tol = {});

/// Cubic Hermite interpolation of u on the stored grid. Throws OutOfRange.
double value_at(const RadialSolution& sol, double r);

/// Cubic Hermite interpolation of u' (using u'' from the ODE). Throws OutOfRange.
double flux_at(const RadialSolution& sol, double r);

/// u0 sinh(sqrt(lambda) r) / (sqrt(lambda) r), the regular solution of
/// u'' + 2u'/r = lambda u with u(0) = u0.
double closed_form_linear_center(double lambda, double u0, double r);
double closed_form_linear_center_slope(double lambda, double u0, double r);

/// Solution with u(rho) = u0, u'(rho) = 0 for linear consumption.
double closed_form_linear_annulus(double lambda, double rho, double u0, double r);
double closed_form_linear_annulus_slope(double lambda, double rho, double u0, double r);

}  // namespace trilayer
