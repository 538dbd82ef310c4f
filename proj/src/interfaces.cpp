#include "trilayer/interfaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "trilayer/roots.hpp"

namespace trilayer {

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::Necrotic: return "necrotic";
    case Layer::Quiescent: return "quiescent";
    case Layer::Proliferating: return "proliferating";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// RadialProfile

const LayerSegment& RadialProfile::segment_at(double r) const {
  if (layers.empty()) throw Error(Errc::OutOfRange, "empty profile");
  const double slack = 1e-12 * std::max(1.0, R);
  if (r < -slack || r > R + slack) {
    throw Error(Errc::OutOfRange, "r = " + std::to_string(r) + " outside [0, R]");
  }
  for (const auto& seg : layers) {
    if (r <= seg.r_end) return seg;
  }
  return layers.back();
}

double RadialProfile::sigma(double r) const {
  const auto& seg = segment_at(r);
  if (!seg.arc) return seg.constant_value;
  return value_at(*seg.arc, std::clamp(r, seg.arc->start(), seg.arc->end()));
}

double RadialProfile::dsigma(double r) const {
  const auto& seg = segment_at(r);
  if (!seg.arc) return 0.0;
  return flux_at(*seg.arc, std::clamp(r, seg.arc->start(), seg.arc->end()));
}

std::vector<ProfilePoint> RadialProfile::points(int necrotic_samples) const {
  std::vector<ProfilePoint> out;
  auto emit = [&](double r, double s, double ds, Layer tag) {
    if (!out.empty() && r <= out.back().r) return;
    out.push_back({r, s, ds, tag});
  };
  for (const auto& seg : layers) {
    if (!seg.arc) {
      const int n = std::max(2, necrotic_samples);
      for (int i = 0; i < n; ++i) {
        const double r = seg.r_begin + (seg.r_end - seg.r_begin) * i / (n - 1);
        emit(r, seg.constant_value, 0.0, seg.tag);
      }
      continue;
    }
    const auto& a = *seg.arc;
    for (std::size_t i = 0; i < a.r.size(); ++i) emit(a.r[i], a.u[i], a.du[i], seg.tag);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FreeBoundarySolver

namespace {

enum class Regime {
  NecroticOne,
  QuiescentOne,
  QuiescentNecroticTwo,
  ProliferatingOne,
  ProliferatingQuiescentTwo,
  ProliferatingQuiescentNecroticThree,
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

struct FreeBoundarySolver::Interior {
  Regime regime = Regime::NecroticOne;
  std::optional<double> rho;
  std::optional<double> eta;
  std::optional<RadialSolution> quiescent;
  std::optional<RadialSolution> proliferating;
};

FreeBoundarySolver::FreeBoundarySolver(ValidatedConfig cfg, SolverOptions opts)
    : cfg_(std::move(cfg)), opts_(opts) {}

RadialRhs FreeBoundarySolver::quiescent_rhs() const { return {cfg_.rates().g, {}}; }

RadialRhs FreeBoundarySolver::proliferating_rhs() const { return {cfg_.rates().f, cfg_.rates().S}; }

RadialSolution FreeBoundarySolver::quiescent_arc_from_rho(double rho) const {
  if (!(rho >= 0)) throw Error(Errc::InvalidArgument, "rho must be >= 0, got " + num(rho));
  const auto& th = cfg_.thresholds();
  return integrate_radial(quiescent_rhs(), rho, th.sigma_D, 0.0, StopCondition::until_value(th.sigma_Q),
                          opts_.tolerances);
}

RadialSolution FreeBoundarySolver::quiescent_arc_from_center(double c) const {
  const auto& th = cfg_.thresholds();
  if (!(c >= th.sigma_D && c < th.sigma_Q)) {
    throw Error(Errc::InvalidArgument, "center value " + num(c) + " outside [sigma_D, sigma_Q)");
  }
  return integrate_radial(quiescent_rhs(), 0.0, c, 0.0, StopCondition::until_value(th.sigma_Q),
                          opts_.tolerances);
}

RadialSolution FreeBoundarySolver::proliferating_arc(double eta, double flux, double sigma_bar) const {
  const auto& th = cfg_.thresholds();
  if (!(sigma_bar > th.sigma_Q)) {
    throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  }
  return integrate_radial(proliferating_rhs(), eta, th.sigma_Q, eta == 0.0 ? 0.0 : flux,
                          StopCondition::until_value(sigma_bar), opts_.tolerances);
}

double FreeBoundarySolver::eta_of_rho(double rho) const { return quiescent_arc_from_rho(rho).end(); }

double FreeBoundarySolver::eta_star() const {
  if (opts_.memoize) {
    std::lock_guard lock(mutex_);
    if (eta_star_) return *eta_star_;
  }
  const double value = eta_of_rho(0.0);
  if (opts_.memoize) {
    std::lock_guard lock(mutex_);
    eta_star_ = value;
  }
  return value;
}

double FreeBoundarySolver::rho_of_eta(double eta) const {
  const double es = eta_star();
  if (eta < es * (1.0 - 1e-12)) {
    throw Error(Errc::BelowEtaStar, "eta = " + num(eta) + " < eta* = " + num(es));
  }
  if (eta <= es) return 0.0;
  auto fn = [&](double rho) { return eta_of_rho(rho) - eta; };
  return find_root(fn, {0.0, eta, es - eta, fn(eta)}, opts_.root_rel_tol);
}

double FreeBoundarySolver::center_value_for_eta(double eta) const {
  const auto& th = cfg_.thresholds();
  auto fn = [&](double c) {
    if (c >= th.sigma_Q) return -eta;
    return quiescent_arc_from_center(c).end() - eta;
  };
  return find_root(fn, {th.sigma_D, th.sigma_Q, eta_star() - eta, -eta}, opts_.root_rel_tol);
}

double FreeBoundarySolver::interface_flux(double eta) const {
  if (eta < 0 || std::isnan(eta)) throw Error(Errc::NonPositiveEta, "eta = " + num(eta));
  if (eta == 0.0) return 0.0;
  const double es = eta_star();
  if (eta >= es) return quiescent_arc_from_rho(rho_of_eta(eta)).du.back();
  const double c = center_value_for_eta(eta);
  if (c >= cfg_.thresholds().sigma_Q) return 0.0;
  return quiescent_arc_from_center(c).du.back();
}

double FreeBoundarySolver::R_of_eta(double eta, double sigma_bar) const {
  if (!(sigma_bar > cfg_.thresholds().sigma_Q)) {
    throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  }
  if (!(eta >= 0)) throw Error(Errc::InvalidArgument, "eta must be >= 0, got " + num(eta));
  return proliferating_arc(eta, interface_flux(eta), sigma_bar).end();
}

double FreeBoundarySolver::R_star(double sigma_bar) const {
  auto radii = critical_radii(sigma_bar);
  if (!radii.R_star) throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  return *radii.R_star;
}

double FreeBoundarySolver::R_sub_star(double sigma_bar) const {
  auto radii = critical_radii(sigma_bar);
  if (!radii.R_sub_star) {
    throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  }
  return *radii.R_sub_star;
}

double FreeBoundarySolver::R_q_star(double sigma_bar) const {
  auto radii = critical_radii(sigma_bar);
  if (!radii.R_q_star) {
    throw Error(Errc::InvalidArgument,
                "R_q* needs sigma_D < sigma_bar <= sigma_Q, got sigma_bar = " + num(sigma_bar));
  }
  return *radii.R_q_star;
}

CriticalRadii FreeBoundarySolver::compute_critical_radii(double sigma_bar) const {
  const auto& th = cfg_.thresholds();
  CriticalRadii out;
  if (sigma_bar > th.sigma_Q) {
    const auto core = quiescent_arc_from_rho(0.0);
    out.R_star = proliferating_arc(core.end(), core.du.back(), sigma_bar).end();
    out.R_sub_star = proliferating_arc(0.0, 0.0, sigma_bar).end();
  } else if (sigma_bar > th.sigma_D) {
    if (sigma_bar == th.sigma_Q) {
      out.R_q_star = eta_star();
    } else {
      out.R_q_star = integrate_radial(quiescent_rhs(), 0.0, th.sigma_D, 0.0,
                                      StopCondition::until_value(sigma_bar), opts_.tolerances)
                         .end();
    }
  }
  return out;
}

CriticalRadii FreeBoundarySolver::critical_radii(double sigma_bar) const {
  if (!std::isfinite(sigma_bar)) throw Error(Errc::NonFinite, "sigma_bar = " + num(sigma_bar));
  if (!opts_.memoize) return compute_critical_radii(sigma_bar);
  const auto key = std::bit_cast<std::uint64_t>(sigma_bar);
  {
    std::lock_guard lock(mutex_);
    if (auto it = radii_cache_.find(key); it != radii_cache_.end()) return it->second;
  }
  auto radii = compute_critical_radii(sigma_bar);
  std::lock_guard lock(mutex_);
  radii_cache_.emplace(key, radii);
  return radii;
}

FreeBoundarySolver::Interior FreeBoundarySolver::solve_interior(double R, double sigma_bar) const {
  if (!(R > 0) || !std::isfinite(R)) throw Error(Errc::InvalidArgument, "R must be > 0, got " + num(R));
  if (!(sigma_bar > 0) || !std::isfinite(sigma_bar)) {
    throw Error(Errc::InvalidArgument, "sigma_bar must be > 0, got " + num(sigma_bar));
  }
  const auto& th = cfg_.thresholds();
  const double rtol = opts_.root_rel_tol;
  Interior in;

  if (sigma_bar <= th.sigma_D) {
    in.regime = Regime::NecroticOne;
    return in;
  }

  if (sigma_bar <= th.sigma_Q) {
    const double Rq = R_q_star(sigma_bar);
    const auto g_rhs = quiescent_rhs();
    if (R <= Rq) {
      auto residual = [&](double c) {
        return integrate_radial(g_rhs, 0.0, c, 0.0, StopCondition::until_radius(R), opts_.tolerances).u.back() -
               sigma_bar;
      };
      const double c = find_root_clamped(residual, {th.sigma_D, sigma_bar, residual(th.sigma_D), residual(sigma_bar)}, rtol);
      in.regime = Regime::QuiescentOne;
      in.quiescent = integrate_radial(g_rhs, 0.0, c, 0.0, StopCondition::until_radius(R), opts_.tolerances);
      return in;
    }
    auto arc_from = [&](double rho) {
      return integrate_radial(g_rhs, rho, th.sigma_D, 0.0, StopCondition::until_value(sigma_bar), opts_.tolerances);
    };
    auto residual = [&](double rho) { return arc_from(rho).end() - R; };
    const double rho = find_root(residual, {0.0, R, Rq - R, residual(R)}, rtol);
    in.regime = Regime::QuiescentNecroticTwo;
    in.rho = rho;
    in.quiescent = integrate_radial(g_rhs, rho, th.sigma_D, 0.0, StopCondition::until_radius(R), opts_.tolerances);
    return in;
  }

  const auto radii = critical_radii(sigma_bar);
  const double R_sub = *radii.R_sub_star;
  const double R_sup = *radii.R_star;
  const auto f_rhs = proliferating_rhs();

  if (R <= R_sub) {
    auto arc_from = [&](double c) {
      return integrate_radial(f_rhs, 0.0, c, 0.0, StopCondition::until_radius(R), opts_.tolerances);
    };
    auto residual = [&](double c) { return arc_from(c).u.back() - sigma_bar; };
    const double c =
        find_root_clamped(residual, {th.sigma_Q, sigma_bar, residual(th.sigma_Q), residual(sigma_bar)}, rtol);
    in.regime = Regime::ProliferatingOne;
    in.proliferating = arc_from(c);
    return in;
  }

  if (R <= R_sup) {
    const double c = center_for_R_two_layer(R, sigma_bar);
    in.regime = Regime::ProliferatingQuiescentTwo;
    if (c >= th.sigma_Q) {
      in.eta = 0.0;
      in.proliferating = integrate_radial(f_rhs, 0.0, th.sigma_Q, 0.0, StopCondition::until_radius(R), opts_.tolerances);
      return in;
    }
    in.quiescent = quiescent_arc_from_center(c);
    in.eta = in.quiescent->end();
    in.proliferating = integrate_radial(f_rhs, *in.eta, th.sigma_Q, in.quiescent->du.back(),
                                        StopCondition::until_radius(std::max(R, *in.eta)), opts_.tolerances);
    return in;
  }

  const double rho = rho_for_R(R, sigma_bar);
  in.regime = Regime::ProliferatingQuiescentNecroticThree;
  in.rho = rho;
  in.quiescent = quiescent_arc_from_rho(rho);
  in.eta = in.quiescent->end();
  in.proliferating = integrate_radial(f_rhs, *in.eta, th.sigma_Q, in.quiescent->du.back(),
                                      StopCondition::until_radius(std::max(R, *in.eta)), opts_.tolerances);
  return in;
}

double FreeBoundarySolver::center_for_R_two_layer(double R, double sigma_bar) const {
  const auto& th = cfg_.thresholds();
  const auto radii = critical_radii(sigma_bar);
  if (R == *radii.R_star) return th.sigma_D;
  if (R == *radii.R_sub_star) return th.sigma_Q;
  auto R_end = [&](double c) {
    if (c >= th.sigma_Q) return *radii.R_sub_star;
    const auto core = quiescent_arc_from_center(c);
    return proliferating_arc(core.end(), core.du.back(), sigma_bar).end();
  };
  auto residual = [&](double c) { return R_end(c) - R; };
  return find_root(residual, {th.sigma_D, th.sigma_Q, *radii.R_star - R, *radii.R_sub_star - R},
                   opts_.root_rel_tol);
}

double FreeBoundarySolver::rho_for_R(double R, double sigma_bar) const {
  const double R_sup = R_star(sigma_bar);
  if (R == R_sup) return 0.0;
  auto residual = [&](double rho) {
    const auto core = quiescent_arc_from_rho(rho);
    return proliferating_arc(core.end(), core.du.back(), sigma_bar).end() - R;
  };
  return find_root(residual, {0.0, R, R_sup - R, residual(R)}, opts_.root_rel_tol);
}

double FreeBoundarySolver::eta_of_R(double R, double sigma_bar) const {
  if (!(sigma_bar > cfg_.thresholds().sigma_Q)) {
    throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  }
  const double R_sub = R_sub_star(sigma_bar);
  if (R < R_sub * (1.0 - 1e-12)) {
    throw Error(Errc::BelowCriticalRadius, "R = " + num(R) + " < R_*(sigma_bar) = " + num(R_sub));
  }
  if (R <= R_sub) return 0.0;
  const double R_sup = R_star(sigma_bar);
  if (R <= R_sup) {
    const double c = center_for_R_two_layer(R, sigma_bar);
    if (c >= cfg_.thresholds().sigma_Q) return 0.0;
    return quiescent_arc_from_center(c).end();
  }
  return eta_of_rho(rho_for_R(R, sigma_bar));
}

double FreeBoundarySolver::rho_of_R(double R, double sigma_bar) const {
  if (!(sigma_bar > cfg_.thresholds().sigma_Q)) {
    throw Error(Errc::SigmaBelowQuiescent, "sigma_bar = " + num(sigma_bar) + " <= sigma_Q");
  }
  if (R <= R_star(sigma_bar)) return 0.0;
  return rho_for_R(R, sigma_bar);
}

InterfaceGeometry FreeBoundarySolver::geometry(double R, double sigma_bar) const {
  const auto in = solve_interior(R, sigma_bar);
  InterfaceGeometry geo;
  geo.R = R;
  geo.rho = in.rho;
  geo.eta = in.eta;
  if (in.eta) geo.phi_at_eta = in.quiescent ? in.quiescent->du.back() : 0.0;
  return geo;
}

RadialProfile FreeBoundarySolver::assemble_profile(double R, double sigma_bar) const {
  auto in = solve_interior(R, sigma_bar);
  RadialProfile p;
  p.R = R;
  p.sigma_bar = sigma_bar;
  p.rho = in.rho;
  p.eta = in.eta;
  const double sigma_D = cfg_.thresholds().sigma_D;

  switch (in.regime) {
    case Regime::NecroticOne:
      p.layers.push_back({Layer::Necrotic, 0.0, R, std::nullopt, sigma_bar});
      break;
    case Regime::QuiescentOne:
      p.layers.push_back({Layer::Quiescent, 0.0, R, std::move(in.quiescent), 0.0});
      break;
    case Regime::QuiescentNecroticTwo:
      p.layers.push_back({Layer::Necrotic, 0.0, *in.rho, std::nullopt, sigma_D});
      p.layers.push_back({Layer::Quiescent, *in.rho, R, std::move(in.quiescent), 0.0});
      break;
    case Regime::ProliferatingOne:
      p.layers.push_back({Layer::Proliferating, 0.0, R, std::move(in.proliferating), 0.0});
      break;
    case Regime::ProliferatingQuiescentTwo:
      if (in.quiescent) p.layers.push_back({Layer::Quiescent, 0.0, *in.eta, std::move(in.quiescent), 0.0});
      p.layers.push_back({Layer::Proliferating, *in.eta, R, std::move(in.proliferating), 0.0});
      break;
    case Regime::ProliferatingQuiescentNecroticThree:
      if (*in.rho > 0) p.layers.push_back({Layer::Necrotic, 0.0, *in.rho, std::nullopt, sigma_D});
      p.layers.push_back({Layer::Quiescent, *in.rho, *in.eta, std::move(in.quiescent), 0.0});
      p.layers.push_back({Layer::Proliferating, *in.eta, R, std::move(in.proliferating), 0.0});
      break;
  }
  return p;
}

}  // namespace trilayer
