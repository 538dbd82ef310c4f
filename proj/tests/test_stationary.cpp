#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace trilayer;
using namespace testing_support;

namespace {

const Model& canonical() {
  static const Model model = canonical_model();
  return model;
}

double upper_envelope(const ValidatedConfig& cfg, double sb) {
  const double s = cfg.S(sb) / 3.0;
  return sb > cfg.thresholds().sigma_Q ? s : std::max(s, -cfg.thresholds().nu1 / 3.0);
}

}  // namespace

TEST_CASE("growth functional against closed-form references") {
  const auto& growth = *canonical().growth;
  CHECK(std::abs(growth.growth_functional(2.0, 2.0) - oracle::F_R2_sb2) <= 1e-10);
  CHECK(std::abs(growth.growth_functional(4.0, 2.0) - oracle::F_R4_sb2) <= 1e-10);
  CHECK(std::abs(growth.growth_functional(8.0, 2.0) - oracle::F_R8_sb2) <= 1e-10);
}

TEST_CASE("growth functional special regimes and limits") {
  const auto& growth = *canonical().growth;
  const auto& maps = growth.maps();
  for (double R : {1e-3, 1.0, 50.0}) {
    CHECK(growth.growth_functional(R, 0.2) == -1.0 / 3.0);
    CHECK(growth.growth_functional(R, 0.05) == -1.0 / 3.0);
  }
  CHECK(growth.growth_functional(0.5 * maps.R_q_star(0.4), 0.4) == -0.6 / 3.0);

  const double sb = 2.0;
  CHECK(std::abs(growth.growth_functional(1e3 * maps.R_star(sb), sb) + 1.0 / 3.0) <= 1e-3);
  CHECK(std::abs(growth.growth_functional(1e-4, sb) - (sb - 1.0) / 3.0) <= 1e-3);
  CHECK(growth.growth_functional(1e-4, 1.5) > 0.0);
  CHECK(growth.growth_functional(1e-4, 0.8) < 0.0);
}

TEST_CASE("uniform envelope for random radii and supplies") {
  const auto& growth = *canonical().growth;
  const auto& cfg = growth.maps().config();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_r(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> supply(0.05, 6.0);
  int outside = 0;
  for (int i = 0; i < 50; ++i) {
    const double R = std::exp(log_r(rng));
    const double sb = supply(rng);
    const double F = growth.growth_functional(R, sb);
    outside += !(F >= -1.0 / 3.0 - 1e-12 && F <= upper_envelope(cfg, sb) + 1e-12);
  }
  CHECK(outside == 0);
}

TEST_CASE("F decreases in R across all regimes and is continuous at the critical radii") {
  const auto& growth = *canonical().growth;
  const auto& maps = growth.maps();
  const double sb = 3.0;
  double prev = growth.growth_functional(1e-2, sb);
  bool decreasing = true;
  for (int k = 1; k < 20; ++k) {
    const double R = 1e-2 * std::pow(1e4, k / 19.0);
    const double F = growth.growth_functional(R, sb);
    decreasing &= F < prev;
    prev = F;
  }
  CHECK(decreasing);
  CHECK(maps.R_sub_star(sb) < 1e2);
  CHECK(maps.R_star(sb) > 1e-2);

  for (double Rc : {maps.R_sub_star(sb), maps.R_star(sb)}) {
    const double left = growth.growth_functional(Rc * (1 - 1e-8), sb);
    const double right = growth.growth_functional(Rc * (1 + 1e-8), sb);
    CHECK(std::abs(left - right) <= 1e-6);
  }
}

TEST_CASE("critical supply functionals") {
  const auto& growth = *canonical().growth;
  const auto cv = growth.critical_values();
  CHECK(growth.G_functional(1.0) < 0.0);
  for (double s : {1.1, 2.0, 5.0}) {
    const double h = 1e-5 * s;
    CHECK(growth.G_functional(s + h) - growth.G_functional(s - h) > 0.0);
    CHECK(growth.Fcal_functional(s + h) - growth.Fcal_functional(s - h) > 0.0);
  }
  CHECK(growth.G_functional(0.5 * cv.sigma_star + 0.5) < 0.0);
  CHECK(std::abs(growth.G_functional(cv.sigma_star)) <= 1e-10);
  CHECK(growth.G_functional(2.0 * cv.sigma_star) > 0.0);

  CHECK(std::abs(growth.Fcal_functional(cv.sigma_sub_star)) <= 1e-10);
  CHECK(growth.Fcal_functional(0.5 * (0.5 + cv.sigma_sub_star)) < 0.0);
  CHECK(growth.Fcal_functional(cv.sigma_sub_star) > growth.G_functional(cv.sigma_sub_star));
  CHECK(growth.Fcal_functional(cv.sigma_star) > growth.G_functional(cv.sigma_star));
  CHECK(throws_code([&] { growth.G_functional(0.5); }, Errc::SigmaBelowQuiescent));
}

TEST_CASE("critical values match the reference and parameter trends") {
  const auto cv = canonical().growth->critical_values();
  CHECK(rel_err(cv.sigma_star, oracle::sigma_star) < 1e-9);
  CHECK(rel_err(cv.sigma_sub_star, oracle::sigma_sub_star) < 1e-9);
  CHECK(1.0 < cv.sigma_sub_star);
  CHECK(cv.sigma_sub_star < cv.sigma_star);

  double prev = 0.0;
  for (double nu1 : {0.5, 0.6, 0.8}) {
    auto cfg = canonical_config();
    cfg.thresholds.nu1 = nu1;
    const double s = model_from(cfg).growth->critical_values().sigma_star;
    CHECK(s > prev);
    prev = s;
  }
  prev = 1e300;
  for (double sq : {0.4, 0.5, 0.6}) {
    auto cfg = canonical_config();
    cfg.thresholds.sigma_Q = sq;
    const double s = model_from(cfg).growth->critical_values().sigma_sub_star;
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("stationary solutions follow the supply classification") {
  const auto& growth = *canonical().growth;
  const auto& maps = growth.maps();
  const auto cv = growth.critical_values();

  CHECK(growth.stationary_solution(1.0).kind == StationaryKind::Trivial);
  CHECK(growth.stationary_solution(0.3).kind == StationaryKind::Trivial);
  CHECK_FALSE(growth.stationary_solution(0.5).R_s.has_value());

  const auto at_star = growth.stationary_solution(cv.sigma_star);
  CHECK(at_star.kind == StationaryKind::TwoLayer);
  CHECK(rel_err(*at_star.R_s, maps.R_star(cv.sigma_star)) < 1e-9);
  CHECK(std::abs(maps.assemble_profile(*at_star.R_s, cv.sigma_star).center_value() - 0.2) < 1e-8);

  const auto s2 = growth.stationary_solution(2.0);
  CHECK(rel_err(*s2.R_s, oracle::R_s_sb2) < 1e-9);

  const double one = 0.9 * cv.sigma_sub_star + 0.1;
  const double two = 0.5 * (cv.sigma_sub_star + cv.sigma_star);
  const double three = 1.5 * cv.sigma_star;
  const auto s_one = growth.stationary_solution(one);
  const auto s_two = growth.stationary_solution(two);
  const auto s_three = growth.stationary_solution(three);
  CHECK(s_one.kind == StationaryKind::OneLayer);
  CHECK(s_two.kind == StationaryKind::TwoLayer);
  CHECK(s_three.kind == StationaryKind::ThreeLayer);
  CHECK(*s_one.R_s <= maps.R_sub_star(one));
  CHECK(*s_two.R_s > maps.R_sub_star(two));
  CHECK(*s_two.R_s <= maps.R_star(two));
  CHECK(*s_two.eta_s > 0.0);
  CHECK(*s_two.eta_s <= maps.eta_star());
  CHECK(*s_three.R_s > maps.R_star(three));
  CHECK(*s_three.rho_s > 0.0);
  CHECK(*s_three.eta_s > maps.eta_star());
  CHECK(*s_three.rho_s < *s_three.eta_s);
  for (const auto& [s, sb] : {std::pair{s_one, one}, std::pair{s_two, two}, std::pair{s_three, three}}) {
    CHECK(s.residual <= 1e-10);
    CHECK(std::abs(growth.growth_functional(*s.R_s, sb)) <= 1e-10);
  }
}

TEST_CASE("tiny tumors follow the small-radius expansion") {
  const auto& growth = *canonical().growth;
  for (double R : {1e-6, 1e-8, 1e-30}) {
    CHECK(rel_err(growth.growth_functional(R, 1.0), -R * R / 45.0) < 1e-9);
    CHECK(std::abs(growth.growth_functional(R, 2.0) - (1.0 / 3.0 - 2.0 * R * R / 45.0)) <= 1e-15);
  }
  // Both evaluation routes agree near the switch radius.
  const double R_switch = std::sqrt(1e-8 / 2.0);
  const double below = growth.growth_functional(R_switch * (1 - 1e-6), 1.0);
  const double above = growth.growth_functional(R_switch * (1 + 1e-6), 1.0);
  CHECK(std::abs(below - above) <= 1e-4 * R_switch * R_switch / 45.0);
}
