#include "trilayer/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace trilayer {

namespace odeint = boost::numeric::odeint;

const char* to_string(StructureState state) {
  switch (state) {
    case StructureState::ProliferatingOne: return "proliferating_one";
    case StructureState::ProliferatingQuiescentTwo: return "proliferating_quiescent_two";
    case StructureState::ProliferatingQuiescentNecroticThree: return "proliferating_quiescent_necrotic_three";
    case StructureState::QuiescentOne: return "quiescent_one";
    case StructureState::QuiescentNecroticTwo: return "quiescent_necrotic_two";
    case StructureState::NecroticOne: return "necrotic_one";
  }
  return "unknown";
}

const char* to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::ConvergedToStationary: return "converged_to_stationary";
    case TerminalKind::Extinguishing: return "extinguishing";
    case TerminalKind::TimeBudgetReached: return "time_budget_reached";
  }
  return "unknown";
}

namespace {

constexpr double kEventRelTol = 1e-13;
constexpr double kExtinctionRatio = 1e-12;
constexpr double kStationaryRelTol = 1e-9;
constexpr double kStationaryRhsTol = 1e-10;  // relative to R_s

StructureState classify_with(double R, double sigma_bar, const Thresholds& th, const CriticalRadii& radii) {
  if (sigma_bar <= th.sigma_D) return StructureState::NecroticOne;
  if (sigma_bar <= th.sigma_Q) {
    return R <= *radii.R_q_star ? StructureState::QuiescentOne : StructureState::QuiescentNecroticTwo;
  }
  if (R <= *radii.R_sub_star) return StructureState::ProliferatingOne;
  if (R <= *radii.R_star) return StructureState::ProliferatingQuiescentTwo;
  return StructureState::ProliferatingQuiescentNecroticThree;
}

std::vector<double> boundaries(const CriticalRadii& radii) {
  std::vector<double> out;
  for (const auto& r : {radii.R_q_star, radii.R_sub_star, radii.R_star}) {
    if (r) out.push_back(*r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

using State = std::array<double, 1>;

}  // namespace

RadiusEvolution::RadiusEvolution(std::shared_ptr<const GrowthAnalysis> growth, EvolutionOptions opts)
    : growth_(std::move(growth)), opts_(opts) {
  if (!growth_) throw Error(Errc::InvalidArgument, "null growth analysis");
}

double RadiusEvolution::radius_rhs(double R, double sigma_bar) const {
  if (!(R > 0)) throw Error(Errc::NonPositiveInputs, "R must be > 0");
  const auto& th = growth_->maps().config().thresholds();
  if (sigma_bar <= th.sigma_D) return -(th.nu2 / 3.0) * R;
  return R * growth_->growth_functional(R, sigma_bar);
}

StructureState RadiusEvolution::classify_structure(double R, double sigma_bar) const {
  if (!(R > 0) || !(sigma_bar > 0)) throw Error(Errc::NonPositiveInputs, "R and sigma_bar must be > 0");
  const auto& maps = growth_->maps();
  return classify_with(R, sigma_bar, maps.config().thresholds(), maps.critical_radii(sigma_bar));
}

Trajectory RadiusEvolution::evolve(double R0, double sigma_bar, double t_end, double sample_dt) const {
  if (!(R0 > 0) || !(sigma_bar > 0) || !(t_end > 0) || !(sample_dt > 0) || !std::isfinite(R0) ||
      !std::isfinite(t_end) || !std::isfinite(sigma_bar)) {
    throw Error(Errc::NonPositiveInputs, "R0, sigma_bar, t_end and sample_dt must be finite and > 0");
  }
  const auto& maps = growth_->maps();
  const auto& cfg = maps.config();
  const auto& th = cfg.thresholds();
  const auto radii = maps.critical_radii(sigma_bar);
  const auto bounds = boundaries(radii);
  const bool decays = sigma_bar <= cfg.sigma_tilde();

  Trajectory traj;
  if (!decays) traj.terminal.R_s = growth_->stationary_solution(sigma_bar).R_s;

  auto classify = [&](double R) { return classify_with(R, sigma_bar, th, radii); };
  // The state is x = ln(R / R_ref) with R_ref = R_s when it exists, so the
  // step error control tightens as the trajectory settles onto R_s.
  const double log_ref = traj.terminal.R_s ? std::log(*traj.terminal.R_s) : 0.0;
  auto system = [&](const State& x, State& dx, double) {
    dx[0] = th.sigma_D >= sigma_bar ? -th.nu2 / 3.0
                                    : growth_->growth_functional(
                                          std::max(std::exp(x[0] + log_ref), std::numeric_limits<double>::min()),
                                          sigma_bar);
  };
  auto radius = [&](double x) { return std::exp(x + log_ref); };

  struct Mark {
    double t;
    double R;
  };
  std::vector<Mark> marks{{0.0, R0}};
  std::vector<TransitionEvent> events;

  const double x_start = std::log(R0) - log_ref;
  const double x_extinct = x_start + std::log(kExtinctionRatio);
  long next_sample = 1;
  bool extinct = false;

  auto stepper = odeint::make_dense_output(opts_.atol, opts_.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(State{x_start}, 0.0, 1e-2 * std::min(sample_dt, t_end));

  double t_now = 0.0;
  double x_now = x_start;
  while (t_now < t_end && !extinct) {
    const auto [ta, tb_raw] = stepper.do_step(system);
    const double xa = stepper.previous_state()[0];
    const double tb = std::min(tb_raw, t_end);
    State xb_state{};
    if (tb == tb_raw) {
      xb_state = stepper.current_state();
    } else {
      stepper.calc_state(tb, xb_state);
    }
    const double xb = xb_state[0];
    auto x_at = [&](double t) {
      State s{};
      stepper.calc_state(t, s);
      return s[0];
    };

    for (double t = next_sample * sample_dt; t <= tb; t = (++next_sample) * sample_dt) {
      marks.push_back({t, radius(t == tb ? xb : x_at(t))});
    }

    std::vector<TransitionEvent> step_events;
    for (double Rc : bounds) {
      const double c = std::log(Rc) - log_ref;
      const bool below_a = xa <= c;
      if (below_a == (xb <= c)) continue;
      double lo = ta, hi = tb;
      for (int it = 0; it < 200 && hi - lo > kEventRelTol * std::max(hi, 1e-300); ++it) {
        const double mid = 0.5 * (lo + hi);
        ((x_at(mid) <= c) == below_a ? lo : hi) = mid;
      }
      const double up = Rc * (1.0 + 1e-9);
      TransitionEvent ev;
      ev.t = hi;
      ev.from = below_a ? classify(Rc) : classify(up);
      ev.to = below_a ? classify(up) : classify(Rc);
      step_events.push_back(ev);
      marks.push_back({hi, Rc});
    }
    std::sort(step_events.begin(), step_events.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });
    events.insert(events.end(), step_events.begin(), step_events.end());

    t_now = tb;
    x_now = xb;
    if (decays && x_now < x_extinct) {
      extinct = true;
      double lo = ta, hi = tb;
      for (int it = 0; it < 200 && hi - lo > kEventRelTol * std::max(hi, 1e-300); ++it) {
        const double mid = 0.5 * (lo + hi);
        (x_at(mid) < x_extinct ? hi : lo) = mid;
      }
      t_now = hi;
      x_now = hi == tb ? xb : x_at(hi);
      std::erase_if(marks, [&](const Mark& m) { return m.t > t_now; });
      marks.push_back({t_now, radius(x_now)});
    }
  }
  if (!extinct && (marks.back().t < t_end)) marks.push_back({t_end, radius(x_now)});

  std::stable_sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) { return a.t < b.t; });
  for (const auto& m : marks) {
    if (!traj.samples.empty() && m.t <= traj.samples.back().t) continue;
    TrajectorySample s;
    s.t = m.t;
    s.R = m.R;
    s.state = classify(m.R);
    if (opts_.track_interfaces) {
      switch (s.state) {
        case StructureState::ProliferatingQuiescentTwo:
          s.eta = maps.eta_of_R(s.R, sigma_bar);
          break;
        case StructureState::ProliferatingQuiescentNecroticThree:
          s.rho = maps.rho_of_R(s.R, sigma_bar);
          s.eta = maps.eta_of_rho(*s.rho);
          break;
        case StructureState::QuiescentNecroticTwo:
          s.rho = maps.geometry(s.R, sigma_bar).rho;
          break;
        default:
          break;
      }
    }
    traj.samples.push_back(s);
  }
  traj.events = std::move(events);

  const double R_end = radius(x_now);
  if (extinct) {
    traj.terminal.kind = TerminalKind::Extinguishing;
  } else if (traj.terminal.R_s) {
    const double R_s = *traj.terminal.R_s;
    if (std::abs(R_end - R_s) <= kStationaryRelTol * R_s &&
        std::abs(radius_rhs(R_end, sigma_bar)) <= kStationaryRhsTol * R_s) {
      traj.terminal.kind = TerminalKind::ConvergedToStationary;
    }
  }
  return traj;
}

std::vector<TransitionEvent> transition_times(const Trajectory& traj) { return traj.events; }

}  // namespace trilayer
