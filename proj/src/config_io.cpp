#include "trilayer/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trilayer {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::ConfigFormat, where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw Error(Errc::ConfigFormat, "unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(Errc::ConfigFormat, "missing key '" + key + "' in " + where);
  if (!it->is_number()) throw Error(Errc::ConfigFormat, where + "." + key + " must be a number");
  return it->get<double>();
}

}  // namespace

ModelConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigFormat, e.what());
  }
  reject_unknown(doc, {"thresholds", "rates", "sigma_bar", "R0"}, "config");

  ModelConfig cfg;
  const auto th = doc.find("thresholds");
  if (th == doc.end()) throw Error(Errc::ConfigFormat, "missing key 'thresholds'");
  reject_unknown(*th, {"sigma_D", "sigma_Q", "nu1", "nu2"}, "thresholds");
  cfg.thresholds.sigma_D = number(*th, "sigma_D", "thresholds");
  cfg.thresholds.sigma_Q = number(*th, "sigma_Q", "thresholds");
  cfg.thresholds.nu1 = number(*th, "nu1", "thresholds");
  cfg.thresholds.nu2 = number(*th, "nu2", "thresholds");

  const auto rates = doc.find("rates");
  if (rates == doc.end()) throw Error(Errc::ConfigFormat, "missing key 'rates'");
  reject_unknown(*rates, {"kind", "lambda1", "lambda2", "mu", "sigma_tilde"}, "rates");
  const auto kind = rates->find("kind");
  if (kind == rates->end() || !kind->is_string() || kind->get<std::string>() != "linear") {
    throw Error(Errc::ConfigFormat, "rates.kind must be \"linear\"");
  }
  LinearRates lin;
  lin.lambda1 = number(*rates, "lambda1", "rates");
  lin.lambda2 = number(*rates, "lambda2", "rates");
  lin.mu = number(*rates, "mu", "rates");
  lin.sigma_tilde = number(*rates, "sigma_tilde", "rates");
  cfg.rates = lin;

  cfg.sigma_bar = number(doc, "sigma_bar", "config");
  cfg.R0 = number(doc, "R0", "config");
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigFormat, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const ModelConfig& cfg) {
  const auto* lin = std::get_if<LinearRates>(&cfg.rates);
  if (!lin) throw Error(Errc::InvalidArgument, "only linear rates can be serialized");
  json doc = {
      {"thresholds",
       {{"sigma_D", cfg.thresholds.sigma_D},
        {"sigma_Q", cfg.thresholds.sigma_Q},
        {"nu1", cfg.thresholds.nu1},
        {"nu2", cfg.thresholds.nu2}}},
      {"rates",
       {{"kind", "linear"},
        {"lambda1", lin->lambda1},
        {"lambda2", lin->lambda2},
        {"mu", lin->mu},
        {"sigma_tilde", lin->sigma_tilde}}},
      {"sigma_bar", cfg.sigma_bar},
      {"R0", cfg.R0},
  };
  return doc.dump(2);
}

}  // namespace trilayer
