#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trilayer/trilayer.hpp"

namespace trilayer::report {

enum class Format { Csv, Json };

/// 17 significant digits, so parsing the text gives back the same double.
std::string format_number(double x);

/// Parses "start:stop:count" into an evenly spaced grid. Requires count >= 2
/// and start < stop.
std::vector<double> parse_grid(const std::string& spec);

struct CriticalReport {
  double sigma_bar = 0.0;
  double sigma_tilde = 0.0;
  double eta_star = 0.0;
  std::optional<double> R_star;
  std::optional<double> R_sub_star;
  std::optional<double> R_q_star;
  double sigma_star = 0.0;
  double sigma_sub_star = 0.0;
};

CriticalReport run_critical(const Model& model);
std::string render(const CriticalReport& rep, Format fmt);

struct StationaryReport {
  double sigma_bar = 0.0;
  StationaryState state;
};

StationaryReport run_stationary(const Model& model);
std::string render(const StationaryReport& rep, Format fmt);

std::string render(const RadialProfile& profile, Format fmt);

struct EvolveReport {
  double R0 = 0.0;
  double sigma_bar = 0.0;
  double t_end = 0.0;
  double sample_dt = 0.0;
  Trajectory trajectory;
};

std::string render_samples_csv(const Trajectory& traj);
std::string render_events_csv(const Trajectory& traj);
std::string render_json(const EvolveReport& rep);

inline constexpr const char* kSweepParameters[] = {"sigma_bar", "nu1",     "nu2",     "sigma_Q",
                                                  "sigma_D",   "lambda1", "lambda2", "mu"};

struct SweepRow {
  double value = 0.0;
  std::optional<double> sigma_star, sigma_sub_star, R_star, R_sub_star;
  std::optional<StationaryKind> kind;
  std::optional<double> R_s, eta_s, rho_s;
  std::string error;
};

struct SweepReport {
  std::string parameter;
  std::vector<SweepRow> rows;
};

/// One row per grid value, in grid order. Rows are evaluated on up to
/// `threads` workers (0 = hardware concurrency); a failing row records its
/// error and the sweep continues. Only linear-rate configs can be swept.
SweepReport run_sweep(const ModelConfig& base, const std::string& parameter, const std::vector<double>& grid,
                      unsigned threads = 0);
std::string render(const SweepReport& rep, Format fmt);

}  // namespace trilayer::report
