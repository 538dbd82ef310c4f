#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "trilayer/interfaces.hpp"

namespace trilayer {

enum class StationaryKind { Trivial, OneLayer, TwoLayer, ThreeLayer };

/// "trivial", "one_layer", "two_layer", "three_layer".
const char* to_string(StationaryKind kind);

struct StationaryState {
  StationaryKind kind = StationaryKind::Trivial;
  std::optional<double> R_s;
  std::optional<double> eta_s;
  std::optional<double> rho_s;
  double residual = 0.0;  ///< |F(R_s, sigma_bar)|, zero for the trivial state
};

/// Critical external concentrations: three-layer/two-layer (sigma_star) and
/// two-layer/one-layer (sigma_sub_star) stationary structure.
struct CriticalValues {
  double sigma_star = 0.0;
  double sigma_sub_star = 0.0;
};

/// Growth functional
///   F(R, sigma_bar) = R^-3 * int_0^R [S(s) 1{s > sQ} - nu1 1{sD < s <= sQ} - nu2 1{s <= sD}] r^2 dr
/// and everything derived from it: the critical-value functionals
/// G(sigma_bar) = F(R*, sigma_bar) and Fcal(sigma_bar) = F(R_*, sigma_bar),
/// their roots, and the stationary radius.
class GrowthAnalysis {
 public:
  explicit GrowthAnalysis(std::shared_ptr<const FreeBoundarySolver> maps);

  const FreeBoundarySolver& maps() const noexcept { return *maps_; }
  std::shared_ptr<const FreeBoundarySolver> maps_ptr() const noexcept { return maps_; }

  double growth_functional(double R, double sigma_bar) const;
  double growth_functional(const RadialProfile& profile) const;

  double G_functional(double sigma_bar) const;
  double Fcal_functional(double sigma_bar) const;

  /// Roots of G and Fcal above sigma_tilde; computed once and cached.
  /// Throws BracketNotFound if no sign change is found below 1e6 sigma_tilde.
  CriticalValues critical_values() const;

  StationaryState stationary_solution(double sigma_bar) const;

 private:
  std::shared_ptr<const FreeBoundarySolver> maps_;
  mutable std::mutex mutex_;
  mutable std::optional<CriticalValues> critical_;
};

}  // namespace trilayer
