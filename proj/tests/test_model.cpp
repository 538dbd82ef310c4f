#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace trilayer;
using namespace testing_support;

namespace {

std::vector<std::string> violation_names(const ModelConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& v : check_config(cfg)) names.push_back(v.name);
  return names;
}

bool has(const std::vector<std::string>& names, const std::string& want) {
  return std::find(names.begin(), names.end(), want) != names.end();
}

RateTriple quadratic_triple() {
  RateTriple t;
  t.f = [](double s) { return s + s * s; };
  t.df = [](double s) { return 1 + 2 * s; };
  t.g = [](double s) { return 0.5 * s; };
  t.dg = [](double) { return 0.5; };
  t.S = [](double s) { return 0.25 * (s * s * s + s - 2.0); };
  t.dS = [](double s) { return 0.25 * (3 * s * s + 1.0); };
  t.sigma_tilde = 1.0;
  return t;
}

}  // namespace

TEST_CASE("canonical linear configuration validates") {
  const auto cfg = canonical_config();
  CHECK(check_config(cfg).empty());
  const auto v = validate_config(cfg);
  CHECK(v.f(0.5) == 0.5);
  CHECK(v.g(0.5) == 0.25);
  CHECK(v.S(0.5) == -0.5);
  CHECK(v.sigma_tilde() == 1.0);
  REQUIRE(v.linear().has_value());
  CHECK(v.linear()->lambda2 == 0.5);
}

TEST_CASE("reversed thresholds name the ordering clause") {
  auto cfg = canonical_config();
  cfg.thresholds.sigma_D = 0.5;
  cfg.thresholds.sigma_Q = 0.2;
  try {
    validate_config(cfg);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.code() == Errc::AssumptionViolated);
    bool found = false;
    for (const auto& v : e.violations()) found |= v.name == "(A3): sigma_D < sigma_Q";
    CHECK(found);
  }
}

TEST_CASE("slow proliferating consumption violates f(sigma_Q) >= g(sigma_Q)") {
  auto cfg = canonical_config();
  linear_of(cfg).lambda1 = 0.1;
  const auto names = violation_names(cfg);
  REQUIRE(names.size() == 1);
  CHECK(names.front() == "(A3): f(sigma_Q) ≥ g(sigma_Q)");
}

TEST_CASE("each clause of the threshold chain fails independently") {
  SUBCASE("S(sigma_Q) >= -nu1") {
    auto cfg = canonical_config();
    cfg.thresholds.nu1 = 0.4;  // S(0.5) = -0.5 < -0.4
    CHECK(violation_names(cfg) == std::vector<std::string>{"(A3): S(sigma_Q) ≥ -nu1"});
  }
  SUBCASE("-nu1 >= -nu2") {
    auto cfg = canonical_config();
    cfg.thresholds.nu2 = 0.55;
    CHECK(violation_names(cfg) == std::vector<std::string>{"(A3): -nu1 ≥ -nu2"});
  }
  SUBCASE("sigma_Q < sigma_tilde") {
    auto cfg = canonical_config();
    linear_of(cfg).sigma_tilde = 0.45;
    CHECK(has(violation_names(cfg), "(A3): sigma_Q < sigma_tilde"));
  }
  SUBCASE("positivity") {
    auto cfg = canonical_config();
    cfg.thresholds.sigma_D = -0.1;
    CHECK(has(violation_names(cfg), "(A3): sigma_D > 0"));
    cfg = canonical_config();
    cfg.sigma_bar = 0.0;
    CHECK(violation_names(cfg) == std::vector<std::string>{"sigma_bar > 0"});
    cfg = canonical_config();
    cfg.R0 = -1.0;
    CHECK(violation_names(cfg) == std::vector<std::string>{"R0 > 0"});
    cfg = canonical_config();
    linear_of(cfg).mu = 0.0;
    CHECK(has(violation_names(cfg), "(A2): mu > 0"));
  }
}

TEST_CASE("non-finite inputs raise NonFinite") {
  auto cfg = canonical_config();
  cfg.thresholds.nu1 = std::numeric_limits<double>::quiet_NaN();
  CHECK(throws_code([&] { validate_config(cfg); }, Errc::NonFinite));
  cfg = canonical_config();
  cfg.sigma_bar = std::numeric_limits<double>::infinity();
  CHECK(throws_code([&] { validate_config(cfg); }, Errc::NonFinite));
}

TEST_CASE("validation is idempotent") {
  const auto v1 = validate_config(canonical_config(3.0, 2.0));
  const auto v2 = validate_config(v1.to_config());
  CHECK(v2.sigma_bar() == v1.sigma_bar());
  CHECK(v2.R0() == v1.R0());
  CHECK(check_config(v1.to_config()).empty());

  auto bad = canonical_config();
  bad.thresholds.sigma_D = 0.6;
  CHECK(violation_names(bad) == violation_names(bad));
}

TEST_CASE("eval_rate examples") {
  const auto rates = validate_config(canonical_config()).rates();
  CHECK(eval_rate(rates, RateFn::S, 1.0) == 0.0);
  CHECK(eval_rate(rates, RateFn::f, 0.0) == 0.0);
  CHECK(eval_rate(rates, RateFn::g, 0.0) == 0.0);
  CHECK(eval_rate(rates, RateFn::g, 0.5) == 0.25);
  CHECK(eval_rate(rates, RateFn::df, 3.0) == 1.0);
  CHECK(eval_rate(rates, RateFn::dg, 3.0) == 0.5);
  CHECK(eval_rate(rates, RateFn::dS, 3.0) == 1.0);
  CHECK(throws_code([&] { eval_rate(rates, RateFn::f, -1e-9); }, Errc::NegativeConcentration));
}

TEST_CASE("linear family matches the analytic formulas exactly") {
  LinearRates lin{1.7, 0.3, 2.5, 1.25};
  const auto t = lin.triple();
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = dist(rng);
    mismatches += eval_rate(t, RateFn::f, s) != 1.7 * s;
    mismatches += eval_rate(t, RateFn::g, s) != 0.3 * s;
    mismatches += eval_rate(t, RateFn::S, s) != 2.5 * (s - 1.25);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("general rate triples are checked on a sample grid") {
  auto cfg = canonical_config();
  cfg.rates = quadratic_triple();
  CHECK(check_config(cfg).empty());
  const auto v = validate_config(cfg);
  CHECK_FALSE(v.linear().has_value());
  CHECK(v.f(2.0) == 6.0);

  auto bad = quadratic_triple();
  bad.S = [](double s) { return (s - 1.0) * (s - 1.0) * (s - 1.0) - 0.2 * (s - 1.0); };
  bad.dS = [](double s) { return 3 * (s - 1.0) * (s - 1.0) - 0.2; };
  cfg.rates = bad;
  CHECK(has(violation_names(cfg), "(A2): S' > 0"));

  auto shifted = quadratic_triple();
  shifted.g = [](double s) { return 0.5 * s + 0.1; };
  cfg.rates = shifted;
  CHECK(has(violation_names(cfg), "(A1): g(0) = 0"));
}

TEST_CASE("configuration JSON round trip and strict keys") {
  const auto cfg = canonical_config(2.5, 1.5);
  const auto text = config_to_json(cfg);
  const auto back = parse_config_json(text);
  CHECK(back.sigma_bar == 2.5);
  CHECK(back.R0 == 1.5);
  CHECK(back.thresholds.nu1 == 0.6);
  CHECK(std::get<LinearRates>(back.rates).lambda2 == 0.5);
  CHECK(config_to_json(back) == text);

  CHECK(throws_code([] { parse_config_json(R"({"thresholds":{}})"); }, Errc::ConfigFormat));
  std::string extra = text;
  extra.insert(1, "\"colour\": 1,");
  CHECK(throws_code([&] { parse_config_json(extra); }, Errc::ConfigFormat));
  CHECK(throws_code([] { parse_config_json("not json"); }, Errc::ConfigFormat));
}
