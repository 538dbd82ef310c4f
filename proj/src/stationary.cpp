#include "trilayer/stationary.hpp"

#include <cmath>

#include "trilayer/roots.hpp"

namespace trilayer {

const char* to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::Trivial: return "trivial";
    case StationaryKind::OneLayer: return "one_layer";
    case StationaryKind::TwoLayer: return "two_layer";
    case StationaryKind::ThreeLayer: return "three_layer";
  }
  return "unknown";
}

GrowthAnalysis::GrowthAnalysis(std::shared_ptr<const FreeBoundarySolver> maps) : maps_(std::move(maps)) {
  if (!maps_) throw Error(Errc::InvalidArgument, "null interface solver");
}

double GrowthAnalysis::growth_functional(const RadialProfile& profile) const {
  const auto& th = maps_->config().thresholds();
  if (profile.layers.size() == 1) {
    // Uniform shells give the exact constant.
    switch (profile.layers.front().tag) {
      case Layer::Necrotic: return -th.nu2 / 3.0;
      case Layer::Quiescent: return -th.nu1 / 3.0;
      case Layer::Proliferating: break;
    }
  }
  double total = 0.0;
  for (const auto& seg : profile.layers) {
    const double shell = (std::pow(seg.r_end, 3) - std::pow(seg.r_begin, 3)) / 3.0;
    switch (seg.tag) {
      case Layer::Necrotic: total -= th.nu2 * shell; break;
      case Layer::Quiescent: total -= th.nu1 * shell; break;
      case Layer::Proliferating: total += seg.arc->growth_integral; break;
    }
  }
  return total / std::pow(profile.R, 3);
}

double GrowthAnalysis::growth_functional(double R, double sigma_bar) const {
  const auto& th = maps_->config().thresholds();
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "R must be > 0");
  if (!(sigma_bar > 0)) throw Error(Errc::InvalidArgument, "sigma_bar must be > 0");
  if (sigma_bar <= th.sigma_D) return -th.nu2 / 3.0;
  if (sigma_bar > th.sigma_Q) {
    // Tiny tumors: the shot profile differs from sigma_bar by less than the
    // double resolution, so use u = sigma_bar - f(sigma_bar) (R^2 - r^2) / 6.
    const auto& rates = maps_->config().rates();
    const double f0 = rates.f(sigma_bar);
    const double scale = std::abs(rates.df(sigma_bar)) + std::abs(f0) / sigma_bar;
    const double sag = R * R * scale;
    if (sag < 1e-8 && sigma_bar - th.sigma_Q > 1e-4 * sigma_bar) {
      return rates.S(sigma_bar) / 3.0 - rates.dS(sigma_bar) * f0 * R * R / 45.0;
    }
  }
  return growth_functional(maps_->assemble_profile(R, sigma_bar));
}

double GrowthAnalysis::G_functional(double sigma_bar) const {
  return growth_functional(maps_->R_star(sigma_bar), sigma_bar);
}

double GrowthAnalysis::Fcal_functional(double sigma_bar) const {
  return growth_functional(maps_->R_sub_star(sigma_bar), sigma_bar);
}

CriticalValues GrowthAnalysis::critical_values() const {
  {
    std::lock_guard lock(mutex_);
    if (critical_) return *critical_;
  }
  const double st = maps_->config().sigma_tilde();
  const double limit = 1e6 * st;
  const double rtol = maps_->options().root_rel_tol;

  auto G = [&](double s) { return G_functional(s); };
  auto Fc = [&](double s) { return Fcal_functional(s); };

  CriticalValues cv;
  cv.sigma_star = find_root(G, expand_upward(G, st, G(st), 2.0 * st, limit), rtol);
  cv.sigma_sub_star = find_root(Fc, expand_upward(Fc, st, Fc(st), 2.0 * st, limit), rtol);

  std::lock_guard lock(mutex_);
  critical_ = cv;
  return cv;
}

StationaryState GrowthAnalysis::stationary_solution(double sigma_bar) const {
  if (!(sigma_bar > 0) || !std::isfinite(sigma_bar)) {
    throw Error(Errc::InvalidArgument, "sigma_bar must be finite and > 0");
  }
  StationaryState out;
  if (sigma_bar <= maps_->config().sigma_tilde()) return out;

  const auto cv = critical_values();
  const double R_sub = maps_->R_sub_star(sigma_bar);
  const double R_sup = maps_->R_star(sigma_bar);
  const double rtol = maps_->options().root_rel_tol;
  auto F = [&](double R) { return growth_functional(R, sigma_bar); };

  double R_s = 0.0;
  if (sigma_bar <= cv.sigma_sub_star) {
    out.kind = StationaryKind::OneLayer;
    const double F_hi = F(R_sub);
    if (F_hi >= 0) {
      R_s = R_sub;
    } else {
      R_s = find_root(F, expand_downward(F, R_sub, F_hi, 0.5 * R_sub, 1e-12 * R_sub), rtol);
    }
  } else if (sigma_bar <= cv.sigma_star) {
    out.kind = StationaryKind::TwoLayer;
    const double F_hi = F(R_sup);
    if (F_hi >= 0) {
      R_s = R_sup;
    } else {
      R_s = find_root_clamped(F, {R_sub, R_sup, F(R_sub), F_hi}, rtol);
    }
  } else {
    out.kind = StationaryKind::ThreeLayer;
    R_s = find_root(F, expand_upward(F, R_sup, F(R_sup), 2.0 * R_sup, 1e12 * R_sup), rtol);
  }

  out.R_s = R_s;
  out.residual = std::abs(F(R_s));
  if (out.kind != StationaryKind::OneLayer) {
    const auto geo = maps_->geometry(R_s, sigma_bar);
    out.eta_s = geo.eta;
    if (out.kind == StationaryKind::ThreeLayer) out.rho_s = geo.rho;
  }
  return out;
}

}  // namespace trilayer
