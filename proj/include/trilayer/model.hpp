#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trilayer/errors.hpp"

namespace trilayer {

using ScalarFn = std::function<double(double)>;

/// Nutrient thresholds and removal rates of the non-proliferating layers.
struct Thresholds {
  double sigma_D = 0.0;  ///< necrotic threshold
  double sigma_Q = 0.0;  ///< quiescent threshold
  double nu1 = 0.0;      ///< removal rate of quiescent cells
  double nu2 = 0.0;      ///< removal rate of necrotic cells
};

/// General C^1 rate functions supplied with their derivatives.
///
/// f and g are the consumption rates of proliferating and quiescent cells,
/// S the net volume growth rate of proliferating cells and sigma_tilde its
/// zero. Global Lipschitz continuity of f and g (bounded f', g') is assumed
/// and cannot be checked; monotonicity is only sampled on a grid.
struct RateTriple {
  ScalarFn f, g, S;
  ScalarFn df, dg, dS;
  double sigma_tilde = 0.0;
};

/// f(s) = lambda1 s, g(s) = lambda2 s, S(s) = mu (s - sigma_tilde).
struct LinearRates {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu = 0.0;
  double sigma_tilde = 0.0;

  RateTriple triple() const;
};

using RateSpec = std::variant<LinearRates, RateTriple>;

struct ModelConfig {
  Thresholds thresholds;
  RateSpec rates;
  double sigma_bar = 0.0;  ///< external nutrient concentration
  double R0 = 0.0;         ///< initial tumor radius
};

/// The canonical test configuration: lambda1 = 1, lambda2 = 0.5, mu = 1,
/// sigma_tilde = 1, sigma_D = 0.2, sigma_Q = 0.5, nu1 = 0.6, nu2 = 1.
ModelConfig canonical_config(double sigma_bar = 2.0, double R0 = 1.0);

/// Immutable configuration that passed validate_config.
class ValidatedConfig {
 public:
  const Thresholds& thresholds() const noexcept { return thresholds_; }
  const RateTriple& rates() const noexcept { return rates_; }
  const std::optional<LinearRates>& linear() const noexcept { return linear_; }
  double sigma_bar() const noexcept { return sigma_bar_; }
  double R0() const noexcept { return R0_; }
  double sigma_tilde() const noexcept { return rates_.sigma_tilde; }

  double f(double s) const { return rates_.f(s); }
  double g(double s) const { return rates_.g(s); }
  double S(double s) const { return rates_.S(s); }

  /// Plain-data view that round-trips through validate_config.
  ModelConfig to_config() const;

 private:
  friend ValidatedConfig validate_config(const ModelConfig& cfg);
  ValidatedConfig(Thresholds t, RateTriple r, std::optional<LinearRates> lin, double sigma_bar,
                  double R0);

  Thresholds thresholds_;
  RateTriple rates_;
  std::optional<LinearRates> linear_;
  double sigma_bar_;
  double R0_;
};

/// Number of points of the rate monotonicity sample grid.
inline constexpr int kValidationGridPoints = 1001;

/// Every violated assumption clause, one entry per clause. Throws
/// Error(NonFinite) on NaN/inf scalar inputs.
std::vector<Violation> check_config(const ModelConfig& cfg);

/// Throws ValidationError listing the violated clauses, or Error(NonFinite).
ValidatedConfig validate_config(const ModelConfig& cfg);

enum class RateFn { f, g, S, df, dg, dS };

/// Throws Error(NegativeConcentration) for sigma < 0.
double eval_rate(const RateTriple& rates, RateFn which, double sigma);

}  // namespace trilayer
