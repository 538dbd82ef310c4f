#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "trilayer/stationary.hpp"

namespace trilayer {

enum class StructureState {
  ProliferatingOne,
  ProliferatingQuiescentTwo,
  ProliferatingQuiescentNecroticThree,
  QuiescentOne,
  QuiescentNecroticTwo,
  NecroticOne,
};

/// snake_case names used in CSV/JSON output, e.g. "proliferating_quiescent_two".
const char* to_string(StructureState state);

struct TrajectorySample {
  double t = 0.0;
  double R = 0.0;
  std::optional<double> rho;  ///< absent outside states with a necrotic core
  std::optional<double> eta;  ///< absent outside states with a quiescent/proliferating interface
  StructureState state = StructureState::ProliferatingOne;
};

struct TransitionEvent {
  double t = 0.0;
  StructureState from = StructureState::ProliferatingOne;
  StructureState to = StructureState::ProliferatingOne;
};

enum class TerminalKind { ConvergedToStationary, Extinguishing, TimeBudgetReached };

const char* to_string(TerminalKind kind);

struct Terminal {
  TerminalKind kind = TerminalKind::TimeBudgetReached;
  std::optional<double> R_s;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TransitionEvent> events;
  Terminal terminal;
};

struct EvolutionOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  bool track_interfaces = true;  ///< solve rho/eta at every sample
};

/// Tumor radius dynamics R' = R F(R, sigma_bar).
///
/// The integrated variable is ln(R / R_s), or ln R when there is no
/// stationary radius. Critical radii for sigma_bar are computed once per
/// call, so structure changes are detected by scalar comparison after each
/// accepted step and then localized by bisection on the step's dense output.
class RadiusEvolution {
 public:
  explicit RadiusEvolution(std::shared_ptr<const GrowthAnalysis> growth, EvolutionOptions opts = {});

  const GrowthAnalysis& growth() const noexcept { return *growth_; }

  double radius_rhs(double R, double sigma_bar) const;

  /// Boundary radii belong to the simpler state: R = R_* is one-layer,
  /// R = R* two-layer, R = R_q* quiescent one-layer.
  StructureState classify_structure(double R, double sigma_bar) const;

  /// Throws NonPositiveInputs unless R0, sigma_bar, t_end, sample_dt > 0.
  Trajectory evolve(double R0, double sigma_bar, double t_end, double sample_dt) const;

 private:
  std::shared_ptr<const GrowthAnalysis> growth_;
  EvolutionOptions opts_;
};

std::vector<TransitionEvent> transition_times(const Trajectory& traj);

}  // namespace trilayer
