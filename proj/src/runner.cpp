#include "bhflow/runner.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "bhflow/io.hpp"
#include "bhflow/verify.hpp"
#include "bhflow/version.hpp"

namespace bhflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string status_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::NodeAborted: return "node-aborted";
    case TrajectoryStatus::HorizonAsymptotic: return "horizon-asymptotic";
  }
  return "unknown";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

std::string trajectories_csv(const TrajectoryBundle& bundle) {
  std::string csv = "traj_id,t,r,r_star,v,j0,j1,status\n";
  for (const auto& traj : bundle.trajectories) {
    const std::string status = status_string(traj.status);
    for (const auto& s : traj.samples) {
      csv += std::to_string(traj.id);
      csv += ',';
      csv += format_full(s.t);
      csv += ',';
      csv += format_full(s.r);
      csv += ',';
      csv += format_full(s.r_star);
      csv += ',';
      csv += format_full(s.v);
      csv += ',';
      csv += format_full(s.j0);
      csv += ',';
      csv += format_full(s.j1);
      csv += ',';
      csv += status;
      csv += '\n';
    }
  }
  return csv;
}

std::string density_csv_single(const RunConfig& config, const Window& window,
                               const std::vector<double>& times,
                               double node_floor) {
  const auto spec = config.wavepacket();
  const auto params = config.spacetime();
  std::string csv = "t,r_star,r,j0,j1,v\n";
  for (double t : times) {
    const auto grid = density_grid_single(t, window, config.resolution, spec,
                                          params, node_floor);
    for (const auto& p : grid) {
      csv += format_full(t);
      csv += ',';
      csv += format_full(p.r_star);
      csv += ',';
      csv += format_full(p.r);
      csv += ',';
      csv += format_full(p.j0);
      csv += ',';
      csv += format_full(p.j1);
      csv += ',';
      csv += format_full(p.v);
      csv += '\n';
    }
  }
  return csv;
}

std::string density_csv_two(const RunConfig& config, const Window& window,
                            const std::vector<double>& times) {
  const auto spec = config.wavepacket();
  std::string csv = "t,r1_star,r2_star,density\n";
  for (double t : times) {
    const auto grid = density_grid_two(t, window, config.two_photon_grid, spec);
    for (const auto& p : grid) {
      csv += format_full(t);
      csv += ',';
      csv += format_full(p.r1_star);
      csv += ',';
      csv += format_full(p.r2_star);
      csv += ',';
      csv += format_full(p.density);
      csv += '\n';
    }
  }
  return csv;
}

json report_to_json(const verify::CheckReport& rep) {
  return json{{"name", rep.name},
              {"status", verify::to_string(rep.status)},
              {"max_error", rep.max_error},
              {"tolerance", rep.tolerance},
              {"probe_count", rep.probe_count},
              {"notes", rep.notes}};
}

std::string deviation_map_csv(const std::vector<verify::DeviationRecord>& map) {
  std::string csv = "t,r_star,derived,reference,deviation\n";
  for (const auto& rec : map) {
    csv += format_full(rec.t);
    csv += ',';
    csv += format_full(rec.r_star);
    csv += ',';
    csv += format_full(rec.derived);
    csv += ',';
    csv += format_full(rec.reference);
    csv += ',';
    csv += format_full(rec.deviation);
    csv += '\n';
  }
  return csv;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  RunOutcome outcome;
  const fs::path dir(config.output_dir);
  json manifest;
  manifest["tool"] = "bhflow";
  manifest["version"] = kVersion;
  for (const auto& [key, value] : config.items()) {
    manifest["config"][key] = value;
  }

  try {
    config.validate();
    fs::create_directories(dir);

    const auto spec = config.wavepacket();
    const auto params = config.spacetime();
    spec.validate();
    params.validate();
    if (!spec.narrowband()) {
      manifest["warnings"].push_back(
          "k0/sigma below 5: outside the narrowband validity regime");
    }

    std::vector<verify::CheckReport> checks;

    if (config.scenario == Scenario::Single || config.scenario == Scenario::TwoPhoton) {
      const auto ensemble_cfg = config.ensemble();
      const TrajectoryBundle bundle =
          config.scenario == Scenario::Single
              ? run_ensemble(ensemble_cfg, spec, params)
              : run_ensemble_two(ensemble_cfg, spec, params);

      write_text(dir / "trajectories.csv", trajectories_csv(bundle));
      outcome.files.push_back("trajectories.csv");

      const std::string density =
          config.scenario == Scenario::Single
              ? density_csv_single(config, bundle.window, bundle.sample_times,
                                   bundle.node_floor)
              : density_csv_two(config, bundle.window,
                                {config.t0, 0.5 * (config.t0 + config.t1), config.t1});
      write_text(dir / "density.csv", density);
      outcome.files.push_back("density.csv");

      manifest["ensemble"] = {
          {"trajectories", bundle.trajectories.size()},
          {"not_completed", bundle.n_not_completed},
          {"node_floor", bundle.node_floor},
          {"window", {bundle.window.lo, bundle.window.hi}},
      };
    } else if (config.scenario == Scenario::Field) {
      const Window window =
          config.parsed_window().value_or(default_window(spec, config.t0, config.t1));
      std::vector<double> times(config.store_points);
      for (int i = 0; i < config.store_points; ++i) {
        times[i] = config.t0 + (config.t1 - config.t0) * i / (config.store_points - 1);
      }
      const double floor = config.node_floor_scale * density_scale(spec);
      write_text(dir / "density.csv",
                 density_csv_single(config, window, times, floor));
      outcome.files.push_back("density.csv");
    } else {  // Verify
      verify::SuiteConfig suite;
      suite.sigma = config.sigma;
      suite.mass = config.mass;
      suite.seed = config.seed;
      suite.route_ensemble.seed = config.seed;
      suite.route_ensemble.tol = IntegratorTolerances{config.rel_tol, config.abs_tol};
      suite.route_ensemble.node_floor_scale = config.node_floor_scale;
      const auto result = verify::run_suite(suite);
      checks = result.reports;
      write_text(dir / "reference_form_j0_map.csv",
                 deviation_map_csv(result.j0_deviation_map));
      outcome.files.push_back("reference_form_j0_map.csv");
      if (result.any_failed()) outcome.exit_code = 1;
    }

    json report = json::array();
    for (const auto& rep : checks) report.push_back(report_to_json(rep));
    write_text(dir / "report.json", json{{"tool", "bhflow"},
                                         {"version", kVersion},
                                         {"checks", report}}
                                        .dump(2) +
                                        "\n");
    outcome.files.push_back("report.json");

    for (const auto& rep : checks) {
      manifest["checks"].push_back(report_to_json(rep));
    }
  } catch (const std::exception& e) {
    outcome.exit_code = 2;
    outcome.error = e.what();
    manifest["error"] = e.what();
  }

  // Content hashes of everything emitted so far; manifest written last.
  for (const auto& name : outcome.files) {
    const fs::path p = dir / name;
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(p.string())));
    manifest["files"][name] = {{"bytes", fs::file_size(p)},
                               {"fnv1a64", std::string(hash)}};
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) {
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    outcome.files.push_back("manifest.json");
  }
  return outcome;
}

}  // namespace bhflow
