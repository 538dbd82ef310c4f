#include "trilayer/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trilayer {

RateTriple LinearRates::triple() const {
  const double l1 = lambda1, l2 = lambda2, m = mu, st = sigma_tilde;
  RateTriple r;
  r.f = [l1](double s) { return l1 * s; };
  r.g = [l2](double s) { return l2 * s; };
  r.S = [m, st](double s) { return m * (s - st); };
  r.df = [l1](double) { return l1; };
  r.dg = [l2](double) { return l2; };
  r.dS = [m](double) { return m; };
  r.sigma_tilde = st;
  return r;
}

ModelConfig canonical_config(double sigma_bar, double R0) {
  ModelConfig cfg;
  cfg.thresholds = {0.2, 0.5, 0.6, 1.0};
  cfg.rates = LinearRates{1.0, 0.5, 1.0, 1.0};
  cfg.sigma_bar = sigma_bar;
  cfg.R0 = R0;
  return cfg;
}

ValidatedConfig::ValidatedConfig(Thresholds t, RateTriple r, std::optional<LinearRates> lin,
                                 double sigma_bar, double R0)
    : thresholds_(t), rates_(std::move(r)), linear_(lin), sigma_bar_(sigma_bar), R0_(R0) {}

ModelConfig ValidatedConfig::to_config() const {
  ModelConfig cfg;
  cfg.thresholds = thresholds_;
  if (linear_) {
    cfg.rates = *linear_;
  } else {
    cfg.rates = rates_;
  }
  cfg.sigma_bar = sigma_bar_;
  cfg.R0 = R0_;
  return cfg;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(Errc::NonFinite, std::string(what) + " = " + fmt(x));
}

struct Collector {
  std::vector<Violation> out;
  void check(bool ok, const char* name, const std::string& detail) {
    if (!ok) out.push_back({name, detail});
  }
};

}  // namespace

std::vector<Violation> check_config(const ModelConfig& cfg) {
  const auto& th = cfg.thresholds;
  require_finite(th.sigma_D, "sigma_D");
  require_finite(th.sigma_Q, "sigma_Q");
  require_finite(th.nu1, "nu1");
  require_finite(th.nu2, "nu2");
  require_finite(cfg.sigma_bar, "sigma_bar");
  require_finite(cfg.R0, "R0");

  Collector c;
  RateTriple rates;
  if (const auto* lin = std::get_if<LinearRates>(&cfg.rates)) {
    require_finite(lin->lambda1, "lambda1");
    require_finite(lin->lambda2, "lambda2");
    require_finite(lin->mu, "mu");
    require_finite(lin->sigma_tilde, "sigma_tilde");
    c.check(lin->lambda1 > 0, "(A1): lambda1 > 0", "lambda1 = " + fmt(lin->lambda1));
    c.check(lin->lambda2 > 0, "(A1): lambda2 > 0", "lambda2 = " + fmt(lin->lambda2));
    c.check(lin->mu > 0, "(A2): mu > 0", "mu = " + fmt(lin->mu));
    c.check(lin->sigma_tilde > 0, "(A2): sigma_tilde > 0",
            "sigma_tilde = " + fmt(lin->sigma_tilde));
    rates = lin->triple();
  } else {
    rates = std::get<RateTriple>(cfg.rates);
    if (!rates.f || !rates.g || !rates.S || !rates.df || !rates.dg || !rates.dS) {
      throw Error(Errc::InvalidArgument, "rate triple is missing a value or derivative callable");
    }
    require_finite(rates.sigma_tilde, "sigma_tilde");
    c.check(rates.sigma_tilde > 0, "(A2): sigma_tilde > 0",
            "sigma_tilde = " + fmt(rates.sigma_tilde));

    const double f0 = rates.f(0.0), g0 = rates.g(0.0);
    c.check(std::abs(f0) <= 1e-12, "(A1): f(0) = 0", "f(0) = " + fmt(f0));
    c.check(std::abs(g0) <= 1e-12, "(A1): g(0) = 0", "g(0) = " + fmt(g0));
    const double s_at = rates.S(rates.sigma_tilde);
    c.check(std::abs(s_at) <= 1e-12, "(A2): S(sigma_tilde) = 0",
            "S(sigma_tilde) = " + fmt(s_at));

    // Sampled monotonicity; a positive derivative on the grid does not
    // prove monotonicity between samples.
    const double upper = 4.0 * std::max({cfg.sigma_bar, rates.sigma_tilde, th.sigma_Q});
    auto first_bad = [&](const ScalarFn& d) -> std::optional<double> {
      for (int i = 0; i < kValidationGridPoints; ++i) {
        const double s = upper * i / (kValidationGridPoints - 1);
        const double v = d(s);
        if (!(v > 0)) return s;
      }
      return std::nullopt;
    };
    if (auto s = first_bad(rates.df)) c.out.push_back({"(A1): f' > 0", "f'(" + fmt(*s) + ") <= 0"});
    if (auto s = first_bad(rates.dg)) c.out.push_back({"(A1): g' > 0", "g'(" + fmt(*s) + ") <= 0"});
    if (auto s = first_bad(rates.dS)) c.out.push_back({"(A2): S' > 0", "S'(" + fmt(*s) + ") <= 0"});
  }

  c.check(th.sigma_D > 0, "(A3): sigma_D > 0", "sigma_D = " + fmt(th.sigma_D));
  c.check(th.sigma_D < th.sigma_Q, "(A3): sigma_D < sigma_Q",
          "sigma_D = " + fmt(th.sigma_D) + ", sigma_Q = " + fmt(th.sigma_Q));
  c.check(th.sigma_Q < rates.sigma_tilde, "(A3): sigma_Q < sigma_tilde",
          "sigma_Q = " + fmt(th.sigma_Q) + ", sigma_tilde = " + fmt(rates.sigma_tilde));
  c.check(th.nu1 > 0, "nu1 > 0", "nu1 = " + fmt(th.nu1));
  c.check(th.nu2 > 0, "nu2 > 0", "nu2 = " + fmt(th.nu2));
  if (th.sigma_Q >= 0) {
    const double fq = rates.f(th.sigma_Q), gq = rates.g(th.sigma_Q), sq = rates.S(th.sigma_Q);
    c.check(fq >= gq, "(A3): f(sigma_Q) ≥ g(sigma_Q)",
            "f(sigma_Q) = " + fmt(fq) + ", g(sigma_Q) = " + fmt(gq));
    c.check(sq >= -th.nu1, "(A3): S(sigma_Q) ≥ -nu1",
            "S(sigma_Q) = " + fmt(sq) + ", nu1 = " + fmt(th.nu1));
  }
  c.check(-th.nu1 >= -th.nu2, "(A3): -nu1 ≥ -nu2",
          "nu1 = " + fmt(th.nu1) + ", nu2 = " + fmt(th.nu2));
  c.check(cfg.sigma_bar > 0, "sigma_bar > 0", "sigma_bar = " + fmt(cfg.sigma_bar));
  c.check(cfg.R0 > 0, "R0 > 0", "R0 = " + fmt(cfg.R0));
  return std::move(c.out);
}

ValidatedConfig validate_config(const ModelConfig& cfg) {
  auto violations = check_config(cfg);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  std::optional<LinearRates> lin;
  RateTriple rates;
  if (const auto* l = std::get_if<LinearRates>(&cfg.rates)) {
    lin = *l;
    rates = l->triple();
  } else {
    rates = std::get<RateTriple>(cfg.rates);
  }
  return ValidatedConfig(cfg.thresholds, std::move(rates), lin, cfg.sigma_bar, cfg.R0);
}

double eval_rate(const RateTriple& rates, RateFn which, double sigma) {
  if (std::isnan(sigma)) throw Error(Errc::NonFinite, "sigma is NaN");
  if (sigma < 0) throw Error(Errc::NegativeConcentration, "sigma = " + fmt(sigma));
  switch (which) {
    case RateFn::f: return rates.f(sigma);
    case RateFn::g: return rates.g(sigma);
    case RateFn::S: return rates.S(sigma);
    case RateFn::df: return rates.df(sigma);
    case RateFn::dg: return rates.dg(sigma);
    case RateFn::dS: return rates.dS(sigma);
  }
  return 0.0;
}

}  // namespace trilayer
