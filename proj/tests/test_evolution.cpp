#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace trilayer;
using namespace testing_support;
using SS = StructureState;

namespace {

const Model& canonical() {
  static const Model model = canonical_model();
  return model;
}

std::vector<std::pair<SS, SS>> transitions(const Trajectory& traj) {
  std::vector<std::pair<SS, SS>> out;
  for (const auto& e : traj.events) out.emplace_back(e.from, e.to);
  return out;
}

constexpr double kLongRun = 200.0 / 0.6;

}  // namespace

TEST_CASE("radius_rhs") {
  const auto& evo = *canonical().evolution;
  const auto& growth = *canonical().growth;
  const auto st = growth.stationary_solution(2.0);
  CHECK(std::abs(evo.radius_rhs(*st.R_s, 2.0)) <= 1e-9 * *st.R_s);
  CHECK(evo.radius_rhs(3.0, 0.15) == -(1.0 / 3.0) * 3.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logR(std::log(0.05), std::log(50.0));
  std::uniform_real_distribution<double> supply(0.6, 5.0);
  bool bounded = true;
  for (int i = 0; i < 30; ++i) {
    const double R = std::exp(logR(rng));
    const double sb = supply(rng);
    bounded &= std::abs(evo.radius_rhs(R, sb)) <= std::max(1.0, sb - 1.0) * R / 3.0 + 1e-12;
  }
  CHECK(bounded);
  CHECK(throws_code([&] { evo.radius_rhs(0.0, 2.0); }, Errc::NonPositiveInputs));
}

TEST_CASE("structure classification") {
  const auto& evo = *canonical().evolution;
  const auto& maps = *canonical().maps;
  const double sb = 2.0 * canonical().growth->critical_values().sigma_star;
  CHECK(evo.classify_structure(0.5 * maps.R_sub_star(sb), sb) == SS::ProliferatingOne);
  CHECK(evo.classify_structure(maps.R_sub_star(sb), sb) == SS::ProliferatingOne);
  CHECK(evo.classify_structure(maps.R_star(sb), sb) == SS::ProliferatingQuiescentTwo);
  CHECK(evo.classify_structure(2.0 * maps.R_star(sb), sb) == SS::ProliferatingQuiescentNecroticThree);
  CHECK(evo.classify_structure(100.0, 0.1) == SS::NecroticOne);
  CHECK(evo.classify_structure(maps.R_q_star(0.4), 0.4) == SS::QuiescentOne);
  CHECK(evo.classify_structure(1.5 * maps.R_q_star(0.4), 0.4) == SS::QuiescentNecroticTwo);
}

TEST_CASE("stationary initial data stays put") {
  const auto& evo = *canonical().evolution;
  for (double sb : {1.2, 2.0, 3.0}) {
    const double Rs = *canonical().growth->stationary_solution(sb).R_s;
    const auto traj = evo.evolve(Rs, sb, 100.0, 5.0);
    CHECK(traj.events.empty());
    CHECK(transition_times(traj).empty());
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.R - Rs));
    CHECK(worst <= 1e-9 * Rs);
    CHECK(traj.terminal.kind == TerminalKind::ConvergedToStationary);
  }
}

TEST_CASE("necrotic decay is exact") {
  const auto traj = canonical().evolution->evolve(2.0, 0.15, 20.0, 0.5);
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, rel_err(s.R, 2.0 * std::exp(-s.t / 3.0)));
  CHECK(worst <= 1e-9);
  CHECK(traj.samples.size() == 41);
  CHECK(traj.samples.back().t == 20.0);
  for (const auto& s : traj.samples) CHECK(s.state == SS::NecroticOne);
}

TEST_CASE("transition sequences for supplies above sigma_Q") {
  const auto& evo = *canonical().evolution;
  const auto& maps = *canonical().maps;
  const auto cv = canonical().growth->critical_values();
  const double high = 3.0;                                           // above sigma*
  const double mid = 0.5 * (cv.sigma_sub_star + cv.sigma_star);    // between the critical values
  const double low = 1.2;                                            // between sigma_tilde and sigma_*

  struct Case {
    const char* name;
    double sb;
    double R0;
    std::vector<std::pair<SS, SS>> expect;
  };
  const Case cases[] = {
      {"(i)", high, 0.5 * (maps.R_sub_star(high) + maps.R_star(high)),
       {{SS::ProliferatingQuiescentTwo, SS::ProliferatingQuiescentNecroticThree}}},
      {"(ii)", mid, 2.0 * maps.R_star(mid),
       {{SS::ProliferatingQuiescentNecroticThree, SS::ProliferatingQuiescentTwo}}},
      {"(iii)", mid, 0.5 * maps.R_sub_star(mid), {{SS::ProliferatingOne, SS::ProliferatingQuiescentTwo}}},
      {"(iv)", low, 0.5 * (maps.R_sub_star(low) + maps.R_star(low)),
       {{SS::ProliferatingQuiescentTwo, SS::ProliferatingOne}}},
      {"(v)", high, 0.5 * maps.R_sub_star(high),
       {{SS::ProliferatingOne, SS::ProliferatingQuiescentTwo},
        {SS::ProliferatingQuiescentTwo, SS::ProliferatingQuiescentNecroticThree}}},
      {"(vi)", low, 2.0 * maps.R_star(low),
       {{SS::ProliferatingQuiescentNecroticThree, SS::ProliferatingQuiescentTwo},
        {SS::ProliferatingQuiescentTwo, SS::ProliferatingOne}}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    CAPTURE(c.sb);
    const auto traj = evo.evolve(c.R0, c.sb, kLongRun, 1.0);
    CHECK(transitions(traj) == c.expect);
    for (std::size_t i = 1; i < traj.events.size(); ++i) CHECK(traj.events[i].t > traj.events[i - 1].t);
    CHECK(traj.terminal.kind == TerminalKind::ConvergedToStationary);
    CHECK(traj.samples.front().state == c.expect.front().first);
    CHECK(traj.samples.back().state == c.expect.back().second);
  }
}

TEST_CASE("event times are localized and sampled") {
  const auto& evo = *canonical().evolution;
  const auto& maps = *canonical().maps;
  const double sb = 3.0;
  const auto traj = evo.evolve(0.5 * maps.R_sub_star(sb), sb, 40.0, 2.0);
  REQUIRE(traj.events.size() == 2);
  const double Rc[] = {maps.R_sub_star(sb), maps.R_star(sb)};
  for (int k = 0; k < 2; ++k) {
    bool sampled = false;
    for (const auto& s : traj.samples) {
      if (s.t == traj.events[k].t) {
        sampled = true;
        CHECK(rel_err(s.R, Rc[k]) < 1e-8);
      }
    }
    CHECK(sampled);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) increasing &= traj.samples[i].t > traj.samples[i - 1].t;
  CHECK(increasing);
}

TEST_CASE("quiescent supply shrinks through the quiescent one-layer state") {
  const auto& evo = *canonical().evolution;
  const auto& maps = *canonical().maps;
  const double sb = 0.4;
  const auto traj = evo.evolve(2.0 * maps.R_q_star(sb), sb, 400.0, 1.0);
  CHECK(transitions(traj) == std::vector<std::pair<SS, SS>>{{SS::QuiescentNecroticTwo, SS::QuiescentOne}});
  CHECK(traj.terminal.kind == TerminalKind::Extinguishing);
  CHECK(traj.samples.back().R < 1e-12 * traj.samples.front().R * 1.0000001);
  for (const auto& s : traj.samples) {
    if (s.state == SS::QuiescentNecroticTwo) CHECK(s.rho.has_value());
    if (s.state == SS::QuiescentOne) CHECK_FALSE(s.rho.has_value());
  }
}

TEST_CASE("long runs converge or shrink monotonically") {
  const auto& evo = *canonical().evolution;
  const auto& growth = *canonical().growth;
  const auto cv = growth.critical_values();
  for (double sb : {0.5 * (1.0 + cv.sigma_sub_star), 0.5 * (cv.sigma_sub_star + cv.sigma_star), 1.5 * cv.sigma_star}) {
    const double Rs = *growth.stationary_solution(sb).R_s;
    for (double R0 : {0.1 * Rs, 10.0 * Rs}) {
      const auto traj = evo.evolve(R0, sb, kLongRun, 2.0);
      CHECK(rel_err(traj.samples.back().R, Rs) <= 1e-6);
      CHECK(traj.terminal.kind == TerminalKind::ConvergedToStationary);
      bool monotone = true;
      for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const double step = traj.samples[i].R - traj.samples[i - 1].R;
        monotone &= R0 < Rs ? step >= -1e-12 * Rs : step <= 1e-12 * Rs;
      }
      CHECK(monotone);
    }
  }
  // At sigma_bar = sigma_tilde the decay is only algebraic, so it needs a far longer horizon.
  for (const auto& [sb, t_end] : {std::pair{0.8, 200.0}, std::pair{0.95, 400.0}, std::pair{1.0, 1e8}}) {
    const auto traj = evo.evolve(3.0, sb, t_end, t_end / 200.0);
    bool decreasing = true;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) decreasing &= traj.samples[i].R < traj.samples[i - 1].R;
    CHECK(decreasing);
    CHECK(traj.samples.back().R < 1e-3 * 3.0);
  }
}

TEST_CASE("samples respect the exponential envelopes and interface maps") {
  const auto& evo = *canonical().evolution;
  const auto& maps = *canonical().maps;
  const auto& cfg = maps.config();
  for (double sb : {0.3, 0.8, 1.3, 2.0, 3.0}) {
    for (double R0 : {0.5, 20.0}) {
      const auto traj = evo.evolve(R0, sb, 50.0, 0.5);
      const double upper_rate = sb > 0.5 ? cfg.S(sb) / 3.0 : std::max(cfg.S(sb), -0.6) / 3.0;
      for (const auto& s : traj.samples) {
        CHECK(s.R >= R0 * std::exp(-s.t / 3.0) * (1 - 1e-9));
        CHECK(s.R <= R0 * std::exp(upper_rate * s.t) * (1 + 1e-9));
        if (s.state == SS::ProliferatingQuiescentNecroticThree) {
          CHECK(std::abs(*s.rho - maps.rho_of_eta(*s.eta)) <= 1e-9 * std::max(1.0, *s.rho));
          CHECK(std::abs(*s.eta - maps.eta_of_R(s.R, sb)) <= 1e-9 * std::max(1.0, *s.eta));
        }
        if (s.state == SS::ProliferatingOne) {
          CHECK_FALSE(s.eta.has_value());
          CHECK_FALSE(s.rho.has_value());
        }
      }
    }
  }
}

TEST_CASE("invalid evolution inputs") {
  const auto& evo = *canonical().evolution;
  CHECK(throws_code([&] { evo.evolve(0.0, 2.0, 1.0, 0.1); }, Errc::NonPositiveInputs));
  CHECK(throws_code([&] { evo.evolve(1.0, 2.0, -1.0, 0.1); }, Errc::NonPositiveInputs));
  CHECK(throws_code([&] { evo.evolve(1.0, 2.0, 1.0, 0.0); }, Errc::NonPositiveInputs));
}
