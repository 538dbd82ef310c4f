#include "trilayer/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace trilayer::report {

using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

ordered_json jopt(const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

std::string dump(const ordered_json& j) { return j.dump(2) + '\n'; }

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw Error(Errc::InvalidArgument, "grid must be start:stop:count, got '" + spec + "'");
  double start = 0, stop = 0;
  long count = 0;
  try {
    std::size_t pos = 0;
    start = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("start");
    stop = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("stop");
    count = std::stol(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw Error(Errc::InvalidArgument, "cannot parse grid '" + spec + "'");
  }
  if (count < 2) throw Error(Errc::InvalidArgument, "grid needs at least 2 points");
  if (!(start < stop)) throw Error(Errc::InvalidArgument, "grid must be strictly increasing");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  grid.back() = stop;
  return grid;
}

// ---------------------------------------------------------------------------
// critical

CriticalReport run_critical(const Model& model) {
  const auto& cfg = model.maps->config();
  CriticalReport rep;
  rep.sigma_bar = cfg.sigma_bar();
  rep.sigma_tilde = cfg.sigma_tilde();
  rep.eta_star = model.maps->eta_star();
  const auto radii = model.maps->critical_radii(cfg.sigma_bar());
  rep.R_star = radii.R_star;
  rep.R_sub_star = radii.R_sub_star;
  rep.R_q_star = radii.R_q_star;
  const auto cv = model.growth->critical_values();
  rep.sigma_star = cv.sigma_star;
  rep.sigma_sub_star = cv.sigma_sub_star;
  return rep;
}

std::string render(const CriticalReport& rep, Format fmt) {
  if (fmt == Format::Json) {
    ordered_json j;
    j["sigma_bar"] = rep.sigma_bar;
    j["sigma_tilde"] = rep.sigma_tilde;
    j["eta_star"] = rep.eta_star;
    j["R_star"] = jopt(rep.R_star);
    j["R_sub_star"] = jopt(rep.R_sub_star);
    j["R_q_star"] = jopt(rep.R_q_star);
    j["sigma_star"] = rep.sigma_star;
    j["sigma_sub_star"] = rep.sigma_sub_star;
    return dump(j);
  }
  return join_row({"sigma_bar", "sigma_tilde", "eta_star", "R_star", "R_sub_star", "R_q_star", "sigma_star",
                   "sigma_sub_star"}) +
         join_row({format_number(rep.sigma_bar), format_number(rep.sigma_tilde), format_number(rep.eta_star),
                   opt(rep.R_star), opt(rep.R_sub_star), opt(rep.R_q_star), format_number(rep.sigma_star),
                   format_number(rep.sigma_sub_star)});
}

// ---------------------------------------------------------------------------
// stationary

StationaryReport run_stationary(const Model& model) {
  const double sb = model.maps->config().sigma_bar();
  return {sb, model.growth->stationary_solution(sb)};
}

std::string render(const StationaryReport& rep, Format fmt) {
  const auto& s = rep.state;
  if (fmt == Format::Json) {
    ordered_json j;
    j["sigma_bar"] = rep.sigma_bar;
    j["kind"] = to_string(s.kind);
    j["R_s"] = jopt(s.R_s);
    j["eta_s"] = jopt(s.eta_s);
    j["rho_s"] = jopt(s.rho_s);
    j["residual"] = s.residual;
    return dump(j);
  }
  return join_row({"sigma_bar", "kind", "R_s", "eta_s", "rho_s", "residual"}) +
         join_row({format_number(rep.sigma_bar), to_string(s.kind), opt(s.R_s), opt(s.eta_s), opt(s.rho_s),
                   format_number(s.residual)});
}

// ---------------------------------------------------------------------------
// profile

std::string render(const RadialProfile& profile, Format fmt) {
  const auto pts = profile.points();
  if (fmt == Format::Json) {
    ordered_json j;
    j["R"] = profile.R;
    j["sigma_bar"] = profile.sigma_bar;
    j["rho"] = jopt(profile.rho);
    j["eta"] = jopt(profile.eta);
    j["psi"] = profile.psi();
    j["phi"] = profile.phi_frac();
    auto arr = ordered_json::array();
    for (const auto& p : pts) {
      arr.push_back({{"r", p.r}, {"sigma", p.sigma}, {"dsigma", p.dsigma}, {"layer", to_string(p.layer)}});
    }
    j["points"] = std::move(arr);
    return dump(j);
  }
  std::string out = join_row({"r", "sigma", "dsigma", "layer"});
  for (const auto& p : pts) {
    out += join_row({format_number(p.r), format_number(p.sigma), format_number(p.dsigma), to_string(p.layer)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// evolve

std::string render_samples_csv(const Trajectory& traj) {
  std::string out = join_row({"t", "R", "rho", "eta", "state"});
  for (const auto& s : traj.samples) {
    out += join_row({format_number(s.t), format_number(s.R), opt(s.rho), opt(s.eta), to_string(s.state)});
  }
  return out;
}

std::string render_events_csv(const Trajectory& traj) {
  std::string out = join_row({"t", "from", "to"});
  for (const auto& e : traj.events) out += join_row({format_number(e.t), to_string(e.from), to_string(e.to)});
  return out;
}

std::string render_json(const EvolveReport& rep) {
  ordered_json j;
  j["R0"] = rep.R0;
  j["sigma_bar"] = rep.sigma_bar;
  j["t_end"] = rep.t_end;
  j["sample_dt"] = rep.sample_dt;
  auto samples = ordered_json::array();
  for (const auto& s : rep.trajectory.samples) {
    samples.push_back(
        {{"t", s.t}, {"R", s.R}, {"rho", jopt(s.rho)}, {"eta", jopt(s.eta)}, {"state", to_string(s.state)}});
  }
  j["samples"] = std::move(samples);
  auto events = ordered_json::array();
  for (const auto& e : rep.trajectory.events) {
    events.push_back({{"t", e.t}, {"from", to_string(e.from)}, {"to", to_string(e.to)}});
  }
  j["events"] = std::move(events);
  j["terminal"] = {{"kind", to_string(rep.trajectory.terminal.kind)}, {"R_s", jopt(rep.trajectory.terminal.R_s)}};
  return dump(j);
}

// ---------------------------------------------------------------------------
// sweep

namespace {

ModelConfig with_parameter(ModelConfig cfg, const std::string& name, double value) {
  auto* lin = std::get_if<LinearRates>(&cfg.rates);
  if (name == "sigma_bar") {
    cfg.sigma_bar = value;
  } else if (name == "nu1") {
    cfg.thresholds.nu1 = value;
  } else if (name == "nu2") {
    cfg.thresholds.nu2 = value;
  } else if (name == "sigma_Q") {
    cfg.thresholds.sigma_Q = value;
  } else if (name == "sigma_D") {
    cfg.thresholds.sigma_D = value;
  } else if (lin && name == "lambda1") {
    lin->lambda1 = value;
  } else if (lin && name == "lambda2") {
    lin->lambda2 = value;
  } else if (lin && name == "mu") {
    lin->mu = value;
  } else {
    throw Error(Errc::InvalidArgument, "cannot sweep parameter '" + name + "'");
  }
  return cfg;
}

std::string describe(const Error& e) {
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    std::string out(e.name());
    for (const auto& viol : v->violations()) out += (out.size() == e.name().size() ? ": " : "; ") + viol.name;
    return out;
  }
  return std::string(e.name());
}

SweepRow sweep_row(const ModelConfig& base, const std::string& parameter, double value,
                   const std::optional<Model>& shared) {
  SweepRow row;
  row.value = value;
  try {
    const auto cfg = validate_config(with_parameter(base, parameter, value));
    const Model model = shared ? *shared : make_model(cfg);
    const double sb = cfg.sigma_bar();
    const auto cv = model.growth->critical_values();
    row.sigma_star = cv.sigma_star;
    row.sigma_sub_star = cv.sigma_sub_star;
    const auto radii = model.maps->critical_radii(sb);
    row.R_star = radii.R_star;
    row.R_sub_star = radii.R_sub_star;
    const auto st = model.growth->stationary_solution(sb);
    row.kind = st.kind;
    row.R_s = st.R_s;
    row.eta_s = st.eta_s;
    row.rho_s = st.rho_s;
  } catch (const Error& e) {
    row.error = describe(e);
  }
  return row;
}

}  // namespace

SweepReport run_sweep(const ModelConfig& base, const std::string& parameter, const std::vector<double>& grid,
                      unsigned threads) {
  if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters), parameter) == std::end(kSweepParameters)) {
    throw Error(Errc::InvalidArgument, "unknown sweep parameter '" + parameter + "'");
  }
  if (!std::holds_alternative<LinearRates>(base.rates) &&
      (parameter == "lambda1" || parameter == "lambda2" || parameter == "mu")) {
    throw Error(Errc::InvalidArgument, "rate slopes can only be swept for linear rates");
  }
  if (grid.size() < 2) throw Error(Errc::InvalidArgument, "grid needs at least 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(Errc::InvalidArgument, "grid must be strictly increasing");
  }

  // Varying sigma_bar leaves the model itself unchanged, so its caches are shared.
  std::optional<Model> shared;
  if (parameter == "sigma_bar") {
    try {
      auto cfg = base;
      cfg.sigma_bar = grid.front() > 0 ? grid.front() : 1.0;
      shared = make_model(validate_config(cfg));
    } catch (const Error&) {
      shared.reset();
    }
  }

  SweepReport rep;
  rep.parameter = parameter;
  rep.rows.resize(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      rep.rows[i] = sweep_row(base, parameter, grid[i], shared);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rep;
}

std::string render(const SweepReport& rep, Format fmt) {
  auto kind = [](const SweepRow& r) { return r.kind ? std::string(to_string(*r.kind)) : std::string(); };
  if (fmt == Format::Json) {
    ordered_json j;
    j["parameter"] = rep.parameter;
    auto rows = ordered_json::array();
    for (const auto& r : rep.rows) {
      ordered_json row;
      row[rep.parameter] = r.value;
      row["sigma_star"] = jopt(r.sigma_star);
      row["sigma_sub_star"] = jopt(r.sigma_sub_star);
      row["R_star"] = jopt(r.R_star);
      row["R_sub_star"] = jopt(r.R_sub_star);
      row["kind"] = r.kind ? ordered_json(kind(r)) : ordered_json(nullptr);
      row["R_s"] = jopt(r.R_s);
      row["eta_s"] = jopt(r.eta_s);
      row["rho_s"] = jopt(r.rho_s);
      row["error"] = r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return dump(j);
  }
  std::string out = join_row({rep.parameter, "sigma_star", "sigma_sub_star", "R_star", "R_sub_star", "kind", "R_s",
                              "eta_s", "rho_s", "error"});
  for (const auto& r : rep.rows) {
    out += join_row({format_number(r.value), opt(r.sigma_star), opt(r.sigma_sub_star), opt(r.R_star),
                     opt(r.R_sub_star), kind(r), opt(r.R_s), opt(r.eta_s), opt(r.rho_s), csv_field(r.error)});
  }
  return out;
}

}  // namespace trilayer::report
