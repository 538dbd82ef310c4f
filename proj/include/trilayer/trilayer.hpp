#pragma once

#include <memory>

#include "trilayer/config_io.hpp"
#include "trilayer/errors.hpp"
#include "trilayer/evolution.hpp"
#include "trilayer/interfaces.hpp"
#include "trilayer/model.hpp"
#include "trilayer/radial.hpp"
#include "trilayer/stationary.hpp"

namespace trilayer {

/// The three solver layers wired together for one validated configuration.
struct Model {
  std::shared_ptr<const FreeBoundarySolver> maps;
  std::shared_ptr<const GrowthAnalysis> growth;
  std::shared_ptr<const RadiusEvolution> evolution;
};

inline Model make_model(const ValidatedConfig& cfg, SolverOptions solver = {}, EvolutionOptions evo = {}) {
  Model m;
  m.maps = std::make_shared<const FreeBoundarySolver>(cfg, solver);
  m.growth = std::make_shared<const GrowthAnalysis>(m.maps);
  m.evolution = std::make_shared<const RadiusEvolution>(m.growth, evo);
  return m;
}

}  // namespace trilayer
