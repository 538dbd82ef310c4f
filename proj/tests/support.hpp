#pragma once

#include <cmath>
#include <string>

#include "trilayer/trilayer.hpp"

namespace testing_support {

// Reference values for the canonical linear configuration, produced by
// tests/oracles/linear_oracle.py (mpmath, 40 digits, closed-form arcs).
namespace oracle {
inline constexpr double eta_star_canonical = 3.6099989303449883797;
inline constexpr double eta_star_lambda1_ratio2 = 2.1773189849653067526;
inline constexpr double R_sub_star_sb2 = 3.2637961015436468011;
inline constexpr double R_star_sb2 = 5.5822873810245161493;
inline constexpr double R_star_sb3 = 6.0742096341289272973;
inline constexpr double R_q_star_sb04 = 3.079194038150357842;
inline constexpr double phi_eta_star = 0.21936358106226489206;
inline constexpr double eta_of_rho_1 = 3.9902390251149916395;
inline constexpr double phi_rho_1 = 0.23001959962298185521;
inline constexpr double F_R2_sb2 = 0.20398138739421476254;
inline constexpr double F_R4_sb2 = 0.045013487941102920136;
inline constexpr double F_R8_sb2 = -0.087632646935407186915;
inline constexpr double sigma_star = 2.1875102242869698723;
inline constexpr double sigma_sub_star = 1.4244929915407666662;
inline constexpr double R_s_sb2 = 4.9555862442681242073;
}  // namespace oracle

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

inline trilayer::Model canonical_model(trilayer::SolverOptions opts = {}) {
  return trilayer::make_model(trilayer::validate_config(trilayer::canonical_config()), opts);
}

inline trilayer::Model model_from(const trilayer::ModelConfig& cfg) {
  return trilayer::make_model(trilayer::validate_config(cfg));
}

inline trilayer::LinearRates& linear_of(trilayer::ModelConfig& cfg) {
  return std::get<trilayer::LinearRates>(cfg.rates);
}

template <class Fn>
bool throws_code(Fn&& fn, trilayer::Errc code) {
  try {
    fn();
  } catch (const trilayer::Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace testing_support
