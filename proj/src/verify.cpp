#include "bhflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bhflow/errors.hpp"

namespace bhflow::verify {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return out;
}

CheckReport make_report(std::string name, double max_error, double tolerance,
                        long probes, std::string notes) {
  CheckReport rep;
  rep.name = std::move(name);
  rep.max_error = max_error;
  rep.tolerance = tolerance;
  rep.probe_count = probes;
  rep.notes = std::move(notes);
  rep.status = max_error <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double local_scale(const TwoPhotonCurrents& j) {
  return std::max(std::max(std::abs(j.j1_0), std::abs(j.j2_0)),
                  std::max(std::abs(j.j1_1), std::abs(j.j2_1)));
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::DiscrepancyDocumented: return "discrepancy-documented";
  }
  return "unknown";
}

bool SuiteResult::any_failed() const {
  return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) {
    return r.status == CheckStatus::Fail;
  });
}

CheckReport check_weakvalue_kg_equivalence(
    const WavepacketSpec& spec, const SpacetimeParams& params,
    const GridSpec& grid, const QuadratureConfig& quad,
    std::function<double(double, double)> kg_ratio_override) {
  const auto ts = linspace(grid.t_lo, grid.t_hi, grid.nt);
  const auto xs = linspace(grid.x_lo, grid.x_hi, grid.nx);

  double peak = 0.0;
  for (double t : ts) {
    for (double x : xs) {
      peak = std::max(peak, single_current(t, x, spec).j0);
    }
  }
  const double density_floor = 1e-8 * peak;

  double max_rel = 0.0;
  long used = 0;
  for (double t : ts) {
    for (double x : xs) {
      const CurrentSample j = single_current(t, x, spec);
      if (j.j0 <= density_floor) continue;
      ++used;
      const double r = radial_from_tortoise(x, params);
      const double f = params.m > 0.0 ? metric_function(r, params) : 1.0;
      const double kg_ratio =
          kg_ratio_override ? kg_ratio_override(t, x) : j.ratio();
      const double v_kg = f * kg_ratio;
      const auto amp = weak_single_amplitudes(t, x, spec, quad);
      const double v_wv = f * amp.p_product() / amp.h_product();
      const double denom = std::max({std::abs(v_kg), std::abs(v_wv), f});
      max_rel = std::max(max_rel, std::abs(v_wv - v_kg) / denom);
    }
  }
  return make_report(
      "weakvalue-kg-equivalence[alpha=" + format_double(spec.alpha) + "]",
      max_rel, 1e-6, used,
      "relative to max(|v|, f); density floor 1e-8 of grid peak");
}

CheckReport check_weakvalue_kg_equivalence_two(const WavepacketSpec& spec,
                                               int n_events, std::uint64_t seed,
                                               const std::vector<double>& times) {
  std::mt19937_64 rng(seed);
  double max_rel = 0.0;
  for (int i = 0; i < n_events; ++i) {
    const double t = times.empty() ? uniform_in(rng, -1.5, 1.5)
                                   : times[static_cast<std::size_t>(i) % times.size()];
    const TwoPhotonEvent ev{RadialEvent{t, 0.0, uniform_in(rng, -3.0, 3.0)},
                            RadialEvent{t, 0.0, uniform_in(rng, -3.0, 3.0)}};
    const TwoPhotonCurrents kg = two_photon_currents(ev, spec);
    const TwoPhotonCurrents wv = weak_two(ev, spec).currents();
    const double scale = local_scale(kg);
    if (scale == 0.0) continue;
    const double dev =
        std::max(std::max(std::abs(kg.j1_0 - wv.j1_0), std::abs(kg.j1_1 - wv.j1_1)),
                 std::max(std::abs(kg.j2_0 - wv.j2_0), std::abs(kg.j2_1 - wv.j2_1)));
    max_rel = std::max(max_rel, dev / scale);
  }
  return make_report("weakvalue-kg-equivalence[two-photon]", max_rel, 1e-10,
                     n_events,
                     "detector product forms vs conserved currents at equal "
                     "times; relative to the local current scale");
}

CheckReport check_exchange_symmetry(const WavepacketSpec& spec, int n_events,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double max_rel = 0.0;
  for (int i = 0; i < n_events; ++i) {
    const RadialEvent a{uniform_in(rng, -2.0, 2.0), 0.0, uniform_in(rng, -3.0, 3.0)};
    const RadialEvent b{uniform_in(rng, -2.0, 2.0), 0.0, uniform_in(rng, -3.0, 3.0)};
    const TwoPhotonCurrents fwd = two_photon_currents({a, b}, spec);
    const TwoPhotonCurrents rev = two_photon_currents({b, a}, spec);
    const double scale = std::max(local_scale(fwd), local_scale(rev));
    if (scale == 0.0) continue;
    const double dev =
        std::max(std::max(std::abs(fwd.j1_0 - rev.j2_0), std::abs(fwd.j1_1 - rev.j2_1)),
                 std::max(std::abs(fwd.j2_0 - rev.j1_0), std::abs(fwd.j2_1 - rev.j1_1)));
    max_rel = std::max(max_rel, dev / scale);
  }
  return make_report("exchange-symmetry[two-photon]", max_rel, 1e-12, n_events,
                     "j_1(R1,R2) vs j_2(R2,R1) at general two-time events");
}

CheckReport check_null_geodesic_equivalence(const WavepacketSpec& spec,
                                            const SpacetimeParams& params,
                                            const EnsembleConfig& config) {
  EnsembleConfig kg = config;
  kg.route = RouteKind::KgCurrent;
  EnsembleConfig null_route = config;
  null_route.route = RouteKind::MetricNull;

  const TrajectoryBundle a = run_ensemble(kg, spec, params);
  const TrajectoryBundle b = run_ensemble(null_route, spec, params);

  double max_dev = 0.0;
  long probes = 0;
  long incomplete = a.n_not_completed + b.n_not_completed;
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    const auto& ta = a.trajectories[i];
    const auto& tb = b.trajectories[i];
    const std::size_t n = std::min(ta.samples.size(), tb.samples.size());
    for (std::size_t k = 0; k < n; ++k) {
      max_dev = std::max(max_dev,
                         std::abs(ta.samples[k].r_star - tb.samples[k].r_star));
      ++probes;
    }
  }
  std::string notes = "kg-current vs metric-null, " +
                      std::to_string(a.trajectories.size()) + " trajectories";
  if (incomplete > 0) {
    notes += "; " + std::to_string(incomplete) + " not completed";
  }
  auto rep = make_report("route-equivalence[alpha=" + format_double(spec.alpha) +
                             ",m=" + format_double(params.m) + "]",
                         max_dev, 1e-6, probes, notes);
  if (incomplete > 0) rep.status = CheckStatus::Fail;
  return rep;
}

NullIntervalReport check_null_interval(const TrajectoryBundle& bundle,
                                       const SpacetimeParams& params) {
  double max_residual = 0.0;
  double max_det_dev = 0.0;
  long probes = 0;
  long skipped = 0;
  for (const auto& traj : bundle.trajectories) {
    if (traj.status == TrajectoryStatus::NodeAborted) continue;
    for (const auto& s : traj.samples) {
      if (!std::isfinite(s.v) || std::abs(s.j0) <= 0.0) {
        ++skipped;
        continue;
      }
      const double rho = s.j1 / s.j0;
      const double r = params.m > 0.0 ? s.r : 1.0;
      const auto metric =
          warp_metric(shift_from_velocity_ratio(rho), r, params);
      max_residual =
          std::max(max_residual, std::abs(null_interval_residual(metric, s.v)));
      max_det_dev = std::max(max_det_dev, std::abs(metric.det2() + 1.0));
      ++probes;
    }
  }
  NullIntervalReport out;
  out.interval = make_report(
      "null-interval", max_residual, 1e-10, probes,
      "hybrid-metric null condition along stored samples" +
          (skipped ? ("; skipped " + std::to_string(skipped) + " node samples")
                   : std::string{}));
  out.determinant = make_report("metric-determinant", max_det_dev, 1e-12, probes,
                                "2D block determinant vs -1 at the same samples");
  return out;
}

ReferenceFormAudit check_reference_forms_single(const WavepacketSpec& spec,
                                                const GridSpec& grid) {
  WavepacketSpec balanced = spec;
  balanced.alpha = 0.5;

  const auto ts = linspace(grid.t_lo, grid.t_hi, grid.nt);
  const auto xs = linspace(grid.x_lo, grid.x_hi, grid.nx);

  // Reference forms carry no overall k0; the derivation-based currents at
  // alpha = 1/2 equal k0 times them where they agree.
  double scale_j0 = 0.0, scale_j1 = 0.0;
  for (double t : ts) {
    for (double x : xs) {
      const auto ref = refform::single_current_balanced(t, x, balanced);
      scale_j0 = std::max(scale_j0, std::abs(ref.j0));
      scale_j1 = std::max(scale_j1, std::abs(ref.j1));
    }
  }

  ReferenceFormAudit audit;
  double max_j1 = 0.0, max_j0 = 0.0;
  DeviationRecord worst_j0{};
  for (double t : ts) {
    for (double x : xs) {
      const auto derived = single_current(t, x, balanced);
      const auto ref = refform::single_current_balanced(t, x, balanced);
      const double dev_j1 =
          std::abs(derived.j1 / balanced.k0 - ref.j1) / scale_j1;
      const double dev_j0 =
          std::abs(derived.j0 / balanced.k0 - ref.j0) / scale_j0;
      max_j1 = std::max(max_j1, dev_j1);
      if (dev_j0 > max_j0) {
        max_j0 = dev_j0;
        worst_j0 = DeviationRecord{t, x, derived.j0 / balanced.k0, ref.j0, dev_j0};
      }
      audit.j0_map.push_back(
          DeviationRecord{t, x, derived.j0 / balanced.k0, ref.j0, dev_j0});
    }
  }

  const long n_grid = static_cast<long>(ts.size() * xs.size());
  audit.j1 = make_report("reference-form[j1]", max_j1, 1e-10, n_grid,
                         "derivation/k0 vs reference radial current, alpha=1/2");
  audit.j0 = make_report("reference-form[j0]", max_j0, 1e-10, n_grid,
                         "derivation/k0 vs reference density, alpha=1/2");
  if (audit.j0.status == CheckStatus::Fail) {
    audit.j0.status = CheckStatus::DiscrepancyDocumented;
    audit.j0.notes =
        "known mismatch: the reference density's interference term differs "
        "from the derivation (cosine coefficient and sine argument); worst at "
        "(t=" + format_double(worst_j0.t) + ", r*=" + format_double(worst_j0.r_star) +
        "); deviation map emitted";
  }
  return audit;
}

CheckReport check_reference_forms_two(const WavepacketSpec& spec,
                                      int n_events, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double max_two = 0.0;
  for (int i = 0; i < n_events; ++i) {
    const TwoPhotonEvent ev{
        RadialEvent{uniform_in(rng, -1.5, 1.5), 0.0, uniform_in(rng, -3.0, 3.0)},
        RadialEvent{uniform_in(rng, -1.5, 1.5), 0.0, uniform_in(rng, -3.0, 3.0)}};
    const auto derived = two_photon_currents(ev, spec);
    const auto ref = refform::two_photon_currents(ev, spec);
    const double scale = std::max(local_scale(derived), local_scale(ref));
    if (scale == 0.0) continue;
    const double dev = std::max(
        std::max(std::abs(derived.j1_0 - ref.j1_0), std::abs(derived.j1_1 - ref.j1_1)),
        std::max(std::abs(derived.j2_0 - ref.j2_0), std::abs(derived.j2_1 - ref.j2_1)));
    max_two = std::max(max_two, dev / scale);
  }
  return make_report("reference-form[two-photon]", max_two, 1e-10, n_events,
                     "derivation vs reference two-photon currents at random "
                     "two-time events");
}

namespace {

CheckReport continuity_report(const std::string& name, int n_probes, double h,
                              double rounding_scale,
                              const std::function<std::vector<double>(double)>& residuals) {
  // residuals(h) returns per-probe residuals; order estimated by Richardson.
  const std::vector<double> coarse = residuals(h);
  const std::vector<double> fine = residuals(0.5 * h);
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * rounding_scale / h;

  double min_order = std::numeric_limits<double>::infinity();
  long counted = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double rc = std::abs(coarse[i]);
    const double rf = std::abs(fine[i]);
    if (rc <= floor && rf <= floor) continue;  // exact cancellation case
    ++counted;
    min_order = std::min(min_order, std::log2(rc / rf));
  }
  double shortfall;
  std::string notes;
  if (counted == 0) {
    shortfall = 0.0;
    notes = "all residuals at the rounding floor (exact cancellation)";
  } else {
    shortfall = 1.8 - min_order;
    notes = "weakest convergence order " + format_double(min_order) +
            " over " + std::to_string(counted) + " active probes, h = " +
            format_double(h);
  }
  auto rep = make_report(name, shortfall, 0.0, n_probes, notes);
  return rep;
}

}  // namespace

CheckReport check_continuity_single(const WavepacketSpec& spec, int n_probes,
                                    std::uint64_t seed, double h) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> probes(n_probes);
  for (auto& p : probes) {
    p = {uniform_in(rng, -2.0, 2.0), uniform_in(rng, -3.0, 3.0)};
  }
  auto residuals = [&](double step) {
    std::vector<double> out;
    out.reserve(probes.size());
    for (const auto& [t, x] : probes) {
      out.push_back(continuity_residual(t, x, spec, step));
    }
    return out;
  };
  return continuity_report(
      "continuity[single,alpha=" + format_double(spec.alpha) + "]", n_probes, h,
      density_scale(spec), residuals);
}

CheckReport check_continuity_two(const WavepacketSpec& spec, int n_probes,
                                 std::uint64_t seed, double h) {
  std::mt19937_64 rng(seed);
  std::vector<TwoPhotonEvent> probes(n_probes);
  for (auto& ev : probes) {
    ev = TwoPhotonEvent{
        RadialEvent{uniform_in(rng, -1.5, 1.5), 0.0, uniform_in(rng, -3.0, 3.0)},
        RadialEvent{uniform_in(rng, -1.5, 1.5), 0.0, uniform_in(rng, -3.0, 3.0)}};
  }
  auto residuals = [&](double step) {
    std::vector<double> out;
    out.reserve(2 * probes.size());
    for (const auto& ev : probes) {
      const auto [r1, r2] = two_photon_continuity_residual(ev, spec, step);
      out.push_back(r1);
      out.push_back(r2);
    }
    return out;
  };
  return continuity_report("continuity[two-photon]", n_probes, h,
                           density_scale(spec) * density_scale(spec), residuals);
}

SuiteResult run_suite(const SuiteConfig& config) {
  SuiteResult result;
  SpacetimeParams params{config.mass};
  params.validate();

  WavepacketSpec single;
  single.sigma = config.sigma;
  single.k0 = config.k0_over_sigma_single * config.sigma;

  GridSpec grid;
  const double inv_sigma = 1.0 / config.sigma;
  grid.t_lo = -2.0 * inv_sigma;
  grid.t_hi = 2.0 * inv_sigma;
  grid.x_lo = -3.0 * inv_sigma;
  grid.x_hi = 3.0 * inv_sigma;

  for (double alpha : config.alpha_set) {
    WavepacketSpec spec = single;
    spec.alpha = alpha;
    result.reports.push_back(
        check_weakvalue_kg_equivalence(spec, params, grid, config.quad));
  }

  WavepacketSpec two;
  two.sigma = config.sigma;
  two.k0 = config.k0_over_sigma_two * config.sigma;
  two.alpha = 0.5;
  result.reports.push_back(check_weakvalue_kg_equivalence_two(
      two, config.equivalence_events, config.seed, config.two_photon_times));
  result.reports.push_back(
      check_exchange_symmetry(two, config.exchange_events, config.seed + 1));

  WavepacketSpec balanced = single;
  balanced.alpha = 0.5;
  result.reports.push_back(
      check_null_geodesic_equivalence(balanced, params, config.route_ensemble));

  {
    EnsembleConfig kg = config.route_ensemble;
    kg.route = RouteKind::KgCurrent;
    const TrajectoryBundle bundle = run_ensemble(kg, balanced, params);
    const auto null_rep = check_null_interval(bundle, params);
    result.reports.push_back(null_rep.interval);
    result.reports.push_back(null_rep.determinant);
  }

  {
    auto audit = check_reference_forms_single(single, grid);
    result.reports.push_back(audit.j1);
    result.reports.push_back(audit.j0);
    result.reports.push_back(
        check_reference_forms_two(two, 100, config.seed + 2));
    result.j0_deviation_map = std::move(audit.j0_map);
  }

  result.reports.push_back(check_continuity_single(
      balanced, config.continuity_probes, config.seed + 3, config.continuity_h));
  {
    WavepacketSpec pure = single;
    pure.alpha = 1.0;
    result.reports.push_back(check_continuity_single(
        pure, config.continuity_probes, config.seed + 4, config.continuity_h));
  }
  result.reports.push_back(check_continuity_two(
      two, config.continuity_probes, config.seed + 5, config.continuity_h));

  return result;
}

}  // namespace bhflow::verify
