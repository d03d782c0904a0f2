// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bhflow/runner.hpp"
#include "bhflow/stats.hpp"
#include "bhflow/verify.hpp"

using namespace bhflow;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& text) {
  std::printf("[%s] %02d %s\n", pass ? "PASS" : "FAIL", index, text.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

WavepacketSpec spec15(double alpha) { return WavepacketSpec{15.0, 1.0, alpha}; }
WavepacketSpec spec20(double alpha) { return WavepacketSpec{20.0, 1.0, alpha}; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Single-photon weak-value vs conserved-current velocity equivalence.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const SpacetimeParams params{1.0};
  QuadratureConfig quad;
  verify::GridSpec grid;  // 20x20 over t in [-2,2], r* in [-3,3]
  double worst = 0.0;
  bool pass = true;
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto rep =
        verify::check_weakvalue_kg_equivalence(spec15(alpha), params, grid, quad);
    worst = std::max(worst, rep.max_error);
    pass = pass && rep.status == verify::CheckStatus::Pass;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && worst <= 1e-6 && seconds <= 60.0;
  report(1, pass,
         "weak-value vs conserved-current velocity (single photon): max rel dev " +
             fmt(worst) + " <= 1e-06 over 20x20 grid, alpha in {0,...,1} (" +
             fmt(seconds) + " s)");
}

// 2. Two-photon detector-form identity at 1000 random events.
void criterion_2() {
  const auto rep = verify::check_weakvalue_kg_equivalence_two(spec20(0.5), 1000, 101);
  report(2, rep.status == verify::CheckStatus::Pass && rep.max_error <= 1e-10,
         "two-photon weak-value forms vs conserved currents: max rel dev " +
             fmt(rep.max_error) + " <= 1e-10 at 1000 random events");
}

struct RouteBundles {
  TrajectoryBundle kg;
  TrajectoryBundle null_route;
};

RouteBundles integrate_routes() {
  const SpacetimeParams params{1.0};
  EnsembleConfig cfg;
  cfg.n_traj = 200;
  cfg.t0 = -3.0;
  cfg.t1 = 3.0;
  cfg.store_points = 41;
  cfg.seed = 7;
  RouteBundles out;
  cfg.route = RouteKind::KgCurrent;
  out.kg = run_ensemble(cfg, spec15(0.5), params);
  cfg.route = RouteKind::MetricNull;
  out.null_route = run_ensemble(cfg, spec15(0.5), params);
  return out;
}

// 3. Threefold route equivalence on 200 trajectories.
void criterion_3(const RouteBundles& bundles) {
  double worst = 0.0;
  for (std::size_t i = 0; i < bundles.kg.trajectories.size(); ++i) {
    const auto& a = bundles.kg.trajectories[i].samples;
    const auto& b = bundles.null_route.trajectories[i].samples;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      worst = std::max(worst, std::abs(a[k].r_star - b[k].r_star));
    }
  }
  const bool complete = bundles.kg.n_not_completed == 0 &&
                        bundles.null_route.n_not_completed == 0;
  report(3, worst <= 1e-6 && complete,
         "route equivalence kg-current vs metric-null (200 trajectories, t in "
         "[-3,3]): max |dr*| " +
             fmt(worst) + " <= 1e-06" + (complete ? "" : "; incomplete trajectories"));
}

// 4. Null-interval residual and metric determinant along all trajectories.
void criterion_4(const RouteBundles& bundles) {
  const SpacetimeParams params{1.0};
  const auto a = verify::check_null_interval(bundles.kg, params);
  const auto b = verify::check_null_interval(bundles.null_route, params);
  const double res = std::max(a.interval.max_error, b.interval.max_error);
  const double det = std::max(a.determinant.max_error, b.determinant.max_error);
  report(4, res <= 1e-10 && det <= 1e-12,
         "null-interval residual " + fmt(res) + " <= 1e-10 and |det2 + 1| " +
             fmt(det) + " <= 1e-12 along all integrated trajectories");
}

// 5. Continuity convergence order >= 1.8 at 20 probes.
void criterion_5() {
  const auto single = verify::check_continuity_single(spec15(0.5), 20, 13, 1e-3);
  const auto two = verify::check_continuity_two(spec20(0.5), 20, 17, 1e-3);
  const bool pass = single.status == verify::CheckStatus::Pass &&
                    two.status == verify::CheckStatus::Pass;
  report(5, pass,
         "continuity residual order >= 1.8 under h-halving (single alpha=1/2: " +
             single.notes + "; two-photon: " + two.notes + ")");
}

// 6. Limiting trajectories.
void criterion_6() {
  const SpacetimeParams params{1.0};
  std::vector<double> times;
  for (int i = 0; i <= 24; ++i) times.push_back(-3.0 + 6.0 * i / 24.0);

  double dev_out = 0.0, dev_in = 0.0, dev_axis = 0.0;
  {
    const auto spec = spec15(1.0);
    const VelocityField field{&spec, &params, RouteKind::KgCurrent, 1e-18};
    const auto traj = integrate_trajectory(-2.0, -3.0, 3.0, field, times, {}, 0);
    for (const auto& s : traj.samples) {
      dev_out = std::max(dev_out, std::abs(s.r_star - (-2.0 + (s.t + 3.0))));
    }
  }
  {
    const auto spec = spec15(0.0);
    const VelocityField field{&spec, &params, RouteKind::KgCurrent, 1e-18};
    const auto traj = integrate_trajectory(2.0, -3.0, 3.0, field, times, {}, 0);
    for (const auto& s : traj.samples) {
      dev_in = std::max(dev_in, std::abs(s.r_star - (2.0 - (s.t + 3.0))));
    }
  }
  {
    const auto spec = spec15(0.5);
    const VelocityField field{&spec, &params, RouteKind::KgCurrent, 1e-18};
    const auto traj = integrate_trajectory(0.0, -3.0, 3.0, field, times, {}, 0);
    for (const auto& s : traj.samples) {
      dev_axis = std::max(dev_axis, std::abs(s.r_star));
    }
  }

  // Flat limit: the guiding-metric route with m = 0 is the bare ratio field.
  const SpacetimeParams flat{0.0};
  const auto spec = spec15(0.5);
  const VelocityField kg{&spec, &flat, RouteKind::KgCurrent, 1e-18};
  const VelocityField null_route{&spec, &flat, RouteKind::MetricNull, 1e-18};
  double dev_flat = 0.0;
  for (int it = 0; it < 20; ++it) {
    for (int ix = 0; ix < 20; ++ix) {
      const double t = -2.0 + 4.0 * it / 19.0;
      const double x = -3.0 + 6.0 * ix / 19.0;
      dev_flat = std::max(dev_flat, std::abs(kg(t, x) - null_route(t, x)));
    }
  }

  const bool pass =
      dev_out <= 1e-9 && dev_in <= 1e-9 && dev_axis <= 1e-9 && dev_flat <= 1e-12;
  report(6, pass,
         "limiting trajectories: outgoing dev " + fmt(dev_out) + ", ingoing dev " +
             fmt(dev_in) + ", axis dev " + fmt(dev_axis) +
             " (all <= 1e-09); flat-limit field dev " + fmt(dev_flat));
}

// 7. Density transport of 5000 quantile-stratified samples.
void criterion_7() {
  const auto spec = spec15(0.5);
  const SpacetimeParams params{1.0};
  const double t0 = -2.0, t1 = 2.0;
  const Window window = default_window(spec, t0, t1);
  const auto starts = sample_initial_single(
      t0, spec, 5000, SamplingStrategy::QuantileStratified, 0, window, 2048);

  const auto tab = tabulate_density_single(t0, spec, window, 2048);
  double grid_max = 0.0;
  for (double d : tab.density) grid_max = std::max(grid_max, d);
  const VelocityField field{&spec, &params, RouteKind::KgCurrent, 1e-12 * grid_max};

  std::vector<double> finals;
  finals.reserve(starts.size());
  int aborted = 0;
  for (double x0 : starts) {
    const auto traj = integrate_trajectory(x0, t0, t1, field, {t1}, {}, 0);
    if (traj.status == TrajectoryStatus::NodeAborted || traj.samples.empty()) {
      ++aborted;
      continue;
    }
    finals.push_back(traj.samples.back().r_star);
  }

  const auto target = tabulate_density_single(t1, spec, window, 4096);
  const double ks =
      ks_distance(finals, [&](double x) { return target.cdf_at(x); });
  report(7, ks <= 0.02 && aborted == 0,
         "density transport: KS distance " + fmt(ks) +
             " <= 0.02 for 5000 evolved samples" +
             (aborted ? " (" + std::to_string(aborted) + " aborted)" : ""));
}

// 8. No-crossing of the 200 single-photon trajectories.
void criterion_8(const RouteBundles& bundles) {
  bool ordered = true;
  const auto& trajs = bundles.kg.trajectories;
  for (std::size_t k = 0; ordered && k < bundles.kg.sample_times.size(); ++k) {
    for (std::size_t i = 1; i < trajs.size(); ++i) {
      if (!(trajs[i].samples[k].r_star > trajs[i - 1].samples[k].r_star)) {
        ordered = false;
        break;
      }
    }
  }
  report(8, ordered,
         "no-crossing: strict ordering preserved across 200 trajectories at all " +
             std::to_string(bundles.kg.sample_times.size()) + " stored times");
}

// 9. Superluminal coordinate velocities exist in the interference region.
void criterion_9() {
  const auto spec = spec15(0.5);
  const SpacetimeParams params{1.0};
  const double floor = default_node_floor(spec);
  double best_ratio = 0.0;
  double at_t = 0.0, at_x = 0.0;
  for (int it = 0; it <= 40; ++it) {
    const double t = -1.0 + 2.0 * it / 40.0;
    const auto grid =
        density_grid_single(t, Window{-2.0, 2.0}, 1601, spec, params, floor);
    for (const auto& p : grid) {
      if (std::abs(p.j0) < floor) continue;
      const double ratio = std::abs(p.j1 / p.j0);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        at_t = t;
        at_x = p.r_star;
      }
    }
  }
  report(9, best_ratio > 1.0,
         "superluminal coordinate velocity exists: max |v|/f = " + fmt(best_ratio) +
             " > 1 at (t=" + fmt(at_t) + ", r*=" + fmt(at_x) + ")");
}

// 10. Exchange symmetry: currents and sampled clouds.
void criterion_10() {
  const auto rep = verify::check_exchange_symmetry(spec20(0.5), 1000, 19);

  const auto pairs = sample_initial_two(-1.0, spec20(0.5), 5000,
                                        SamplingStrategy::Pseudorandom, 10,
                                        Window{-5.0, 5.0}, 512);
  std::vector<double> da, db;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double d = pairs[i].first - pairs[i].second;
    if (i < pairs.size() / 2) {
      da.push_back(d);
    } else {
      db.push_back(-d);
    }
  }
  const double ks = two_sample_ks(da, db);
  const bool pass = rep.status == verify::CheckStatus::Pass && ks < 0.03;
  report(10, pass,
         "exchange symmetry: current identity max rel dev " + fmt(rep.max_error) +
             " <= 1e-12 (1000 events); sample-cloud two-sample KS " + fmt(ks) +
             " < 0.03 (n=5000)");
}

// 11. Reference-form audit with emitted deviation map.
void criterion_11() {
  verify::GridSpec grid;
  const auto audit = verify::check_reference_forms_single(spec15(0.5), grid);

  const fs::path out = "acceptance_out";
  fs::create_directories(out);
  std::ofstream map(out / "reference_form_j0_map.csv");
  map << "t,r_star,derived,reference,deviation\n";
  for (const auto& rec : audit.j0_map) {
    map << rec.t << ',' << rec.r_star << ',' << rec.derived << ','
        << rec.reference << ',' << rec.deviation << '\n';
  }
  map.close();

  const bool pass =
      audit.j1.status == verify::CheckStatus::Pass && audit.j1.max_error <= 1e-10 &&
      audit.j0.status == verify::CheckStatus::DiscrepancyDocumented &&
      fs::file_size(out / "reference_form_j0_map.csv") > 0;
  report(11, pass,
         "reference-form audit: radial current matches to " + fmt(audit.j1.max_error) +
             " (<= 1e-10); density mismatch documented (max dev " +
             fmt(audit.j0.max_error) + ", map emitted)");
}

// 12. Byte-identical reruns.
void criterion_12() {
  RunConfig cfg;
  cfg.scenario = Scenario::Single;
  cfg.alpha = 0.5;
  cfg.n_traj = 50;
  cfg.t0 = -2.0;
  cfg.t1 = 2.0;
  cfg.store_points = 21;
  cfg.resolution = 1024;
  cfg.seed = 99;
  cfg.output_dir = "acceptance_out/repro";
  fs::remove_all(cfg.output_dir);

  const auto first = run(cfg);
  std::map<std::string, std::string> snapshot;
  for (const auto& name : first.files) {
    snapshot[name] = slurp(fs::path(cfg.output_dir) / name);
  }
  const auto second = run(cfg);
  bool identical = first.exit_code == 0 && second.exit_code == 0 &&
                   !snapshot.empty();
  for (const auto& [name, bytes] : snapshot) {
    identical = identical && slurp(fs::path(cfg.output_dir) / name) == bytes;
  }
  report(12, identical,
         "reproducibility: " + std::to_string(snapshot.size()) +
             " output files byte-identical across reruns with fixed seed");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  const RouteBundles bundles = integrate_routes();
  criterion_3(bundles);
  criterion_4(bundles);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(bundles);
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
  } else {
    std::printf("all 12 criteria passed\n");
  }
  return g_failures == 0 ? 0 : 1;
}
