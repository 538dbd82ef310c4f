#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trilayer/report.hpp"
#include "trilayer/trilayer.hpp"

namespace fs = std::filesystem;
using namespace trilayer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot open output file " + path);
  out << text;
}

std::string events_path(const std::string& out) {
  fs::path p(out);
  fs::path ev = p.parent_path() / (p.stem().string() + "_events.csv");
  return ev.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-steady three-layer tumor growth solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format = "csv";
  std::string out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "output file (default: stdout)");
  };

  auto* critical = app.add_subcommand("critical", "critical radii and supply levels");
  add_common(critical);

  auto* stationary = app.add_subcommand("stationary", "stationary solution at the configured supply");
  add_common(stationary);

  double profile_R = 0.0;
  auto* profile = app.add_subcommand("profile", "nutrient profile for a given tumor radius");
  add_common(profile);
  profile->add_option("--R", profile_R, "tumor radius")->required();

  std::optional<double> evolve_R0;
  double t_end = 0.0;
  double sample_dt = 0.0;
  std::string events_out;
  auto* evolve = app.add_subcommand("evolve", "radius evolution from R0");
  add_common(evolve);
  evolve->add_option("--R0", evolve_R0, "initial radius (default: config R0)");
  evolve->add_option("--t-end", t_end, "final time")->required();
  evolve->add_option("--sample-dt", sample_dt, "sampling interval")->required();
  evolve->add_option("--events-out", events_out, "events CSV path (default: <out stem>_events.csv)");

  std::string sweep_param;
  std::string grid_spec;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep of critical values and stationary states");
  add_common(sweep);
  sweep->add_option("--param", sweep_param, "parameter name")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(report::kSweepParameters),
                                                     std::end(report::kSweepParameters))));
  sweep->add_option("--grid", grid_spec, "start:stop:count")->required();
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const auto fmt = format == "json" ? report::Format::Json : report::Format::Csv;

  ModelConfig raw;
  try {
    raw = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (sweep->parsed()) {
      std::vector<double> grid;
      try {
        grid = report::parse_grid(grid_spec);
      } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
      }
      validate_config(raw);
      write_text(report::render(report::run_sweep(raw, sweep_param, grid, threads), fmt), out_path);
      return kExitOk;
    }

    const auto cfg = validate_config(raw);
    const auto model = make_model(cfg);

    if (critical->parsed()) {
      write_text(report::render(report::run_critical(model), fmt), out_path);
    } else if (stationary->parsed()) {
      write_text(report::render(report::run_stationary(model), fmt), out_path);
    } else if (profile->parsed()) {
      write_text(report::render(model.maps->assemble_profile(profile_R, cfg.sigma_bar()), fmt), out_path);
    } else if (evolve->parsed()) {
      report::EvolveReport rep;
      rep.R0 = evolve_R0.value_or(cfg.R0());
      rep.sigma_bar = cfg.sigma_bar();
      rep.t_end = t_end;
      rep.sample_dt = sample_dt;
      rep.trajectory = model.evolution->evolve(rep.R0, rep.sigma_bar, t_end, sample_dt);
      if (fmt == report::Format::Json) {
        write_text(report::render_json(rep), out_path);
        if (!events_out.empty()) write_text(report::render_events_csv(rep.trajectory), events_out);
      } else if (out_path.empty()) {
        const std::string events = report::render_events_csv(rep.trajectory);
        if (events_out.empty()) {
          write_text(report::render_samples_csv(rep.trajectory) + "\n" + events, "");
        } else {
          write_text(report::render_samples_csv(rep.trajectory), "");
          write_text(events, events_out);
        }
      } else {
        write_text(report::render_samples_csv(rep.trajectory), out_path);
        write_text(report::render_events_csv(rep.trajectory), events_out.empty() ? events_path(out_path) : events_out);
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << e.name() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << v.name << (v.detail.empty() ? "" : ": ") << v.detail << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "SolverFailure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}
