#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "trilayer/model.hpp"
#include "trilayer/radial.hpp"

namespace trilayer {

enum class Layer { Necrotic, Quiescent, Proliferating };

const char* to_string(Layer layer);

/// One radial shell of an assembled profile. Necrotic shells carry a
/// constant concentration; the others carry their solved arc.
struct LayerSegment {
  Layer tag = Layer::Necrotic;
  double r_begin = 0.0;
  double r_end = 0.0;
  std::optional<RadialSolution> arc;
  double constant_value = 0.0;
};

struct ProfilePoint {
  double r, sigma, dsigma;
  Layer layer;
};

/// Nutrient concentration on [0, R] assembled from its layers, inner first.
struct RadialProfile {
  std::vector<LayerSegment> layers;
  std::optional<double> rho;  ///< necrotic radius, absent without a necrotic core
  std::optional<double> eta;  ///< quiescent/proliferating interface, absent without both layers
  double R = 0.0;
  double sigma_bar = 0.0;

  double psi() const { return rho.value_or(0.0) / R; }
  double phi_frac() const { return eta.value_or(0.0) / R; }

  double sigma(double r) const;
  double dsigma(double r) const;
  double center_value() const { return sigma(0.0); }
  const LayerSegment& segment_at(double r) const;

  /// Grid points of every arc (plus a uniform grid over a necrotic core),
  /// strictly increasing in r. An interface point is reported once, tagged
  /// with the inner layer.
  std::vector<ProfilePoint> points(int necrotic_samples = 33) const;
};

struct InterfaceGeometry {
  std::optional<double> rho;
  std::optional<double> eta;
  double R = 0.0;
  std::optional<double> phi_at_eta;
};

/// Critical radii for one external concentration. R_star/R_sub_star exist
/// for sigma_bar > sigma_Q, R_q_star for sigma_D < sigma_bar <= sigma_Q.
struct CriticalRadii {
  std::optional<double> R_star;
  std::optional<double> R_sub_star;
  std::optional<double> R_q_star;
};

struct SolverOptions {
  IntegratorTolerances tolerances{};
  double root_rel_tol = 1e-12;
  bool memoize = true;
};

/// Shooting maps between the free boundaries rho, eta and R of the
/// layered nutrient profile.
///
/// Inside a tumor with sigma(R) = sigma_bar > sigma_Q the profile is fixed by
/// one inner parameter: the center value c in [sigma_Q, sigma_bar] (one
/// layer), the center value c in [sigma_D, sigma_Q] (quiescent core) or the
/// necrotic radius rho >= 0. c = sigma_D and rho = 0 are the same arc, so the
/// two-layer and three-layer branches meet exactly at eta*.
///
/// The memo cache (eta* and per-sigma_bar critical radii) is guarded by a
/// mutex; cached and uncached results are identical.
class FreeBoundarySolver {
 public:
  explicit FreeBoundarySolver(ValidatedConfig cfg, SolverOptions opts = {});

  const ValidatedConfig& config() const noexcept { return cfg_; }
  const SolverOptions& options() const noexcept { return opts_; }

  double eta_of_rho(double rho) const;
  double rho_of_eta(double eta) const;
  double eta_star() const;
  double interface_flux(double eta) const;

  double R_of_eta(double eta, double sigma_bar) const;
  double eta_of_R(double R, double sigma_bar) const;
  double rho_of_R(double R, double sigma_bar) const;
  InterfaceGeometry geometry(double R, double sigma_bar) const;

  double R_star(double sigma_bar) const;
  double R_sub_star(double sigma_bar) const;
  double R_q_star(double sigma_bar) const;
  CriticalRadii critical_radii(double sigma_bar) const;

  RadialProfile assemble_profile(double R, double sigma_bar) const;

  // Solved arcs, exposed for tests and diagnostics.
  RadialSolution quiescent_arc_from_rho(double rho) const;
  RadialSolution quiescent_arc_from_center(double c) const;
  RadialSolution proliferating_arc(double eta, double flux, double sigma_bar) const;

 private:
  struct Interior;

  Interior solve_interior(double R, double sigma_bar) const;
  CriticalRadii compute_critical_radii(double sigma_bar) const;
  double center_value_for_eta(double eta) const;
  double rho_for_R(double R, double sigma_bar) const;
  double center_for_R_two_layer(double R, double sigma_bar) const;

  RadialRhs quiescent_rhs() const;
  RadialRhs proliferating_rhs() const;

  ValidatedConfig cfg_;
  SolverOptions opts_;

  mutable std::mutex mutex_;
  mutable std::optional<double> eta_star_;
  mutable std::map<std::uint64_t, CriticalRadii> radii_cache_;
};

}  // namespace trilayer
