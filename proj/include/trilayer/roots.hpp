#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "trilayer/errors.hpp"

namespace trilayer {

inline constexpr double kRootRelTol = 1e-12;

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

/// Root of a continuous scalar function on a sign-changing bracket.
///
/// Terminates once |hi - lo| <= rel_tol * max(|lo|, |hi|) + abs_tol and
/// returns whichever final endpoint has the smaller residual. abs_tol
/// defaults to 1e-15 of the initial bracket magnitude so that roots at zero
/// still terminate.
template <class Fn>
double find_root(Fn&& fn, Bracket b, double rel_tol = kRootRelTol, double abs_tol = -1.0) {
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  if (std::signbit(b.f_lo) == std::signbit(b.f_hi)) {
    throw Error(Errc::BracketNotFound, "no sign change on [" + std::to_string(b.lo) + ", " +
                                           std::to_string(b.hi) + "]");
  }
  if (abs_tol < 0) abs_tol = 1e-15 * std::max(std::abs(b.lo), std::abs(b.hi));

  std::vector<std::pair<double, double>> seen{{b.lo, b.f_lo}, {b.hi, b.f_hi}};
  auto tracked = [&](double x) {
    const double v = fn(x);
    seen.emplace_back(x, v);
    return v;
  };
  auto tol = [&](double a, double c) {
    return std::abs(c - a) <= rel_tol * std::max(std::abs(a), std::abs(c)) + abs_tol;
  };
  std::uintmax_t max_iter = 300;
  auto [a, c] = boost::math::tools::toms748_solve(tracked, b.lo, b.hi, b.f_lo, b.f_hi, tol, max_iter);

  double best = a, best_f = std::numeric_limits<double>::infinity();
  for (const auto& [x, v] : seen) {
    if ((x == a || x == c) && std::abs(v) < best_f) {
      best = x;
      best_f = std::abs(v);
    }
  }
  if (!std::isfinite(best_f)) best = 0.5 * (a + c);
  return best;
}

/// Like find_root, but when rounding leaves both endpoints on the same side
/// (a root sitting on the bracket edge) the endpoint with the smaller
/// residual is returned instead of throwing.
template <class Fn>
double find_root_clamped(Fn&& fn, Bracket b, double rel_tol = kRootRelTol) {
  if (b.f_lo != 0.0 && b.f_hi != 0.0 && std::signbit(b.f_lo) == std::signbit(b.f_hi)) {
    return std::abs(b.f_lo) <= std::abs(b.f_hi) ? b.lo : b.hi;
  }
  return find_root(std::forward<Fn>(fn), b, rel_tol);
}

/// Grows hi geometrically from `hi0` until fn changes sign relative to
/// fn(lo). Throws BracketNotFound once hi exceeds `limit`.
template <class Fn>
Bracket expand_upward(Fn&& fn, double lo, double f_lo, double hi0, double limit, double factor = 2.0) {
  double prev = lo, f_prev = f_lo;
  double hi = hi0;
  while (hi <= limit) {
    const double f_hi = fn(hi);
    if (f_hi == 0.0 || std::signbit(f_hi) != std::signbit(f_prev)) return {prev, hi, f_prev, f_hi};
    prev = hi;
    f_prev = f_hi;
    hi *= factor;
  }
  throw Error(Errc::BracketNotFound, "upward bracket expansion exceeded " + std::to_string(limit));
}

/// Shrinks lo geometrically from `lo0` towards zero until fn changes sign
/// relative to fn(hi).
template <class Fn>
Bracket expand_downward(Fn&& fn, double hi, double f_hi, double lo0, double floor, double factor = 0.5) {
  double next = hi, f_next = f_hi;
  double lo = lo0;
  while (lo >= floor) {
    const double f_lo = fn(lo);
    if (f_lo == 0.0 || std::signbit(f_lo) != std::signbit(f_next)) return {lo, next, f_lo, f_next};
    next = lo;
    f_next = f_lo;
    lo *= factor;
  }
  throw Error(Errc::BracketNotFound, "downward bracket expansion fell below " + std::to_string(floor));
}

}  // namespace trilayer
