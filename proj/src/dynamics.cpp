#include "bhflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bhflow/errors.hpp"
#include "bhflow/ode.hpp"

namespace bhflow {

namespace {

constexpr double kWindowMassTolerance = 1e-6;

/// Implementation-independent uniform in [0, 1) from a mt19937_64 draw.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return out;
}

TabulatedDensity tabulate(std::vector<double> x, std::vector<double> values) {
  TabulatedDensity tab;
  tab.x = std::move(x);
  tab.density.resize(tab.x.size());
  for (std::size_t i = 0; i < tab.x.size(); ++i) {
    tab.density[i] = std::max(values[i], 0.0);
  }
  tab.cdf.resize(tab.x.size());
  tab.cdf[0] = 0.0;
  for (std::size_t i = 1; i < tab.x.size(); ++i) {
    const double h = tab.x[i] - tab.x[i - 1];
    tab.cdf[i] = tab.cdf[i - 1] + 0.5 * (tab.density[i] + tab.density[i - 1]) * h;
  }
  return tab;
}

/// Signed trapezoid integral (no clamping), for window-mass audits.
double signed_mass(const std::vector<double>& x, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc += 0.5 * (v[i] + v[i - 1]) * (x[i] - x[i - 1]);
  }
  return acc;
}

void check_window_mass(double covered, double analytic, const char* who) {
  const double outside = 1.0 - covered / analytic;
  if (outside > kWindowMassTolerance) {
    throw WindowTooSmallError(
        std::string(who) + ": window misses a fraction " +
            std::to_string(outside) + " of the density mass",
        outside);
  }
}

std::vector<double> make_sample_times(double t0, double t1, int n) {
  return linspace(t0, t1, std::max(n, 2));
}

double quantile_target(int i, int n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

/// f(r) with the flat limit handled: for m = 0 the tortoise chart is the
/// whole line and f = 1 everywhere.
double metric_factor(double r, const SpacetimeParams& params) {
  return params.m > 0.0 ? metric_function(r, params) : 1.0;
}

/// Guiding-metric tortoise velocity for a velocity ratio at tortoise
/// position r_star.
double null_route_tortoise_velocity(double rho, double r_star,
                                    const SpacetimeParams& params) {
  const double r = params.m > 0.0 ? radial_from_tortoise(r_star, params) : 1.0;
  const double f = metric_function(r, params);
  return null_velocity_for_ratio(rho, r, params) / f;
}

TrajectoryStatus classify_end(const Trajectory& traj,
                              const SpacetimeParams& params) {
  if (traj.status != TrajectoryStatus::Completed) return traj.status;
  if (params.m > 0.0 && !traj.samples.empty()) {
    const double r_end = traj.samples.back().r;
    if (r_end - params.horizon_radius() < 1e-12 * params.horizon_radius()) {
      return TrajectoryStatus::HorizonAsymptotic;
    }
  }
  return TrajectoryStatus::Completed;
}

}  // namespace

Window default_window(const WavepacketSpec& spec, double t0, double t1) {
  const double reach = std::max(std::abs(t0), std::abs(t1));
  const double half = reach + 4.0 / spec.sigma;
  return Window{-half, half};
}

double TabulatedDensity::quantile(double q) const {
  const double target = q * total();
  // Locate the cell, then solve the quadratic CDF segment inside it.
  auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.begin()) return x.front();
  if (it == cdf.end()) return x.back();
  const std::size_t i = static_cast<std::size_t>(it - cdf.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double d0 = density[i];
  const double d1 = density[i + 1];
  const double rem = target - cdf[i];
  const double slope = (d1 - d0) / h;
  double xi;
  if (std::abs(slope) * h < 1e-12 * (d0 + d1)) {
    xi = (d0 > 0.0) ? rem / d0 : 0.5 * h;
  } else {
    const double disc = d0 * d0 + 2.0 * slope * rem;
    xi = (std::sqrt(std::max(disc, 0.0)) - d0) / slope;
  }
  return x[i] + std::clamp(xi, 0.0, h);
}

double TabulatedDensity::cdf_at(double pos) const {
  if (pos <= x.front()) return 0.0;
  if (pos >= x.back()) return 1.0;
  auto it = std::upper_bound(x.begin(), x.end(), pos);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double xi = pos - x[i];
  const double d0 = density[i];
  const double slope = (density[i + 1] - d0) / h;
  return (cdf[i] + d0 * xi + 0.5 * slope * xi * xi) / total();
}

TabulatedDensity tabulate_density_single(double t, const WavepacketSpec& spec,
                                         const Window& window, int resolution) {
  const auto xs = linspace(window.lo, window.hi, resolution);
  std::vector<double> j0(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    j0[i] = single_current(t, xs[i], spec).j0;
  }
  auto tab = tabulate(xs, j0);
  check_window_mass(signed_mass(xs, j0), 2.0 * spec.k0, "tabulate_density_single");
  return tab;
}

std::vector<double> sample_initial_single(double t0, const WavepacketSpec& spec,
                                          int n, SamplingStrategy strategy,
                                          std::uint64_t seed, const Window& window,
                                          int resolution) {
  if (n < 1) throw std::invalid_argument("sample_initial_single: n must be >= 1");
  const auto tab = tabulate_density_single(t0, spec, window, resolution);
  std::vector<double> out(n);
  if (strategy == SamplingStrategy::QuantileStratified) {
    for (int i = 0; i < n; ++i) out[i] = tab.quantile(quantile_target(i, n));
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) out[i] = tab.quantile(uniform01(rng));
  }
  return out;
}

std::vector<std::pair<double, double>> sample_initial_two(
    double t0, const WavepacketSpec& spec, int n, SamplingStrategy strategy,
    std::uint64_t seed, const Window& window, int resolution,
    TwoPhotonDensity density) {
  if (n < 1) throw std::invalid_argument("sample_initial_two: n must be >= 1");
  const auto xs = linspace(window.lo, window.hi, resolution);

  auto joint = [&](double r1, double r2) {
    const TwoPhotonEvent ev{RadialEvent{t0, 0.0, r1}, RadialEvent{t0, 0.0, r2}};
    if (density == TwoPhotonDensity::PsiSquared) {
      return std::norm(two_photon_psi(ev, spec));
    }
    const auto j = two_photon_currents(ev, spec);
    return 0.5 * (j.j1_0 + j.j2_0);
  };

  // Marginal over r1 by trapezoid in r2 at each grid row.
  std::vector<double> marginal(xs.size());
  {
    std::vector<double> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t k = 0; k < xs.size(); ++k) row[k] = joint(xs[i], xs[k]);
      marginal[i] = signed_mass(xs, row);
    }
  }
  const double analytic_total =
      (density == TwoPhotonDensity::PsiSquared) ? 1.0 : 2.0 * spec.k0;
  check_window_mass(signed_mass(xs, marginal), analytic_total,
                    "sample_initial_two");
  const auto marginal_tab = tabulate(xs, marginal);

  // Van der Corput base-2 sequence gives the deterministic second coordinate
  // for the stratified strategy.
  auto radical_inverse = [](std::uint64_t k) {
    double inv = 0.0, base = 0.5;
    while (k) {
      if (k & 1) inv += base;
      base *= 0.5;
      k >>= 1;
    }
    return inv;
  };

  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> out(n);
  std::vector<double> row(xs.size());
  for (int i = 0; i < n; ++i) {
    double u1, u2;
    if (strategy == SamplingStrategy::QuantileStratified) {
      u1 = quantile_target(i, n);
      u2 = radical_inverse(static_cast<std::uint64_t>(i) + 1);
    } else {
      u1 = uniform01(rng);
      u2 = uniform01(rng);
    }
    const double r1 = marginal_tab.quantile(u1);
    for (std::size_t k = 0; k < xs.size(); ++k) row[k] = joint(r1, xs[k]);
    const auto conditional = tabulate(xs, row);
    out[i] = {r1, conditional.quantile(u2)};
  }
  return out;
}

double VelocityField::operator()(double t, double r_star) const {
  const CurrentSample j = single_current(t, r_star, *spec);
  if (std::abs(j.j0) < node_floor) {
    throw NodeProximityError("velocity field: density below node floor", j.j0,
                             node_floor);
  }
  const double rho = j.j1 / j.j0;
  if (route == RouteKind::KgCurrent) return rho;
  return null_route_tortoise_velocity(rho, r_star, *params);
}

namespace {

Trajectory finalize_single(int id, const ode::Result<1>& run,
                           const VelocityField& field,
                           const SpacetimeParams& params,
                           const WavepacketSpec& spec) {
  Trajectory traj;
  traj.id = id;
  traj.status = (run.reason == ode::StopReason::Completed)
                    ? TrajectoryStatus::Completed
                    : TrajectoryStatus::NodeAborted;
  traj.note = run.note;
  traj.samples.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    TrajectorySample s;
    s.t = run.t[i];
    s.r_star = run.y[i][0];
    s.r = radial_from_tortoise(s.r_star, params);
    const CurrentSample j = single_current(s.t, s.r_star, spec);
    s.j0 = j.j0;
    s.j1 = j.j1;
    const double f = metric_factor(s.r, params);
    try {
      s.v = f * field(s.t, s.r_star);
    } catch (const NodeProximityError&) {
      s.v = std::numeric_limits<double>::quiet_NaN();
    }
    traj.samples.push_back(s);
  }
  traj.status = classify_end(traj, params);
  return traj;
}

}  // namespace

Trajectory integrate_trajectory(double r_star0, double t0, double t1,
                                const VelocityField& field,
                                const std::vector<double>& sample_times,
                                const IntegratorTolerances& tol, int id) {
  ode::StepControl ctrl;
  ctrl.rel_tol = tol.rel;
  ctrl.abs_tol = tol.abs;
  ode::Rhs<1> rhs = [&field](double t, const ode::State<1>& y) {
    return ode::State<1>{field(t, y[0])};
  };
  const auto run = ode::integrate<1>(rhs, t0, t1, ode::State<1>{r_star0},
                                     sample_times, ctrl);
  return finalize_single(id, run, field, *field.params, *field.spec);
}

TrajectoryBundle run_ensemble(const EnsembleConfig& config,
                              const WavepacketSpec& spec,
                              const SpacetimeParams& params) {
  spec.validate();
  params.validate();
  TrajectoryBundle bundle;
  bundle.window = config.window.value_or(default_window(spec, config.t0, config.t1));
  bundle.sample_times = make_sample_times(config.t0, config.t1, config.store_points);

  const auto tab =
      tabulate_density_single(config.t0, spec, bundle.window, config.resolution);
  const double grid_max =
      *std::max_element(tab.density.begin(), tab.density.end());
  bundle.node_floor = config.node_floor_scale * grid_max;

  const auto starts =
      sample_initial_single(config.t0, spec, config.n_traj, config.sampling,
                            config.seed, bundle.window, config.resolution);

  const VelocityField field{&spec, &params, config.route, bundle.node_floor};
  bundle.trajectories.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    bundle.trajectories.push_back(
        integrate_trajectory(starts[i], config.t0, config.t1, field,
                             bundle.sample_times, config.tol, static_cast<int>(i)));
    if (bundle.trajectories.back().status == TrajectoryStatus::NodeAborted) {
      ++bundle.n_not_completed;
    }
  }
  return bundle;
}

TrajectoryBundle run_ensemble_two(const EnsembleConfig& config,
                                  const WavepacketSpec& spec,
                                  const SpacetimeParams& params) {
  spec.validate();
  params.validate();
  TrajectoryBundle bundle;
  bundle.window = config.window.value_or(default_window(spec, config.t0, config.t1));
  bundle.sample_times = make_sample_times(config.t0, config.t1, config.store_points);

  // Floor from the single-mode density scale at the initial slice.
  const auto pairs = sample_initial_two(
      config.t0, spec, config.n_traj, config.sampling, config.seed, bundle.window,
      std::min(config.resolution, 512), config.two_photon_density);

  double grid_max = 0.0;
  {
    const auto xs = linspace(bundle.window.lo, bundle.window.hi, 256);
    for (double a : xs) {
      for (double b : xs) {
        const TwoPhotonEvent ev{RadialEvent{config.t0, 0.0, a},
                                RadialEvent{config.t0, 0.0, b}};
        const auto j = two_photon_currents(ev, spec);
        grid_max = std::max(grid_max, std::max(j.j1_0, j.j2_0));
      }
    }
  }
  bundle.node_floor = config.node_floor_scale * grid_max;

  ode::StepControl ctrl;
  ctrl.rel_tol = config.tol.rel;
  ctrl.abs_tol = config.tol.abs;

  auto tortoise_pair_velocity = [&](double t, double r1s, double r2s) {
    const TwoPhotonEvent ev{RadialEvent{t, 0.0, r1s}, RadialEvent{t, 0.0, r2s}};
    const auto j = two_photon_currents(ev, spec);
    if (std::abs(j.j1_0) < bundle.node_floor) {
      throw NodeProximityError("pair field: photon-1 density below node floor",
                               j.j1_0, bundle.node_floor);
    }
    if (std::abs(j.j2_0) < bundle.node_floor) {
      throw NodeProximityError("pair field: photon-2 density below node floor",
                               j.j2_0, bundle.node_floor);
    }
    const double rho1 = j.j1_1 / j.j1_0;
    const double rho2 = j.j2_1 / j.j2_0;
    if (config.route == RouteKind::KgCurrent) {
      return std::array<double, 2>{rho1, rho2};
    }
    return std::array<double, 2>{null_route_tortoise_velocity(rho1, r1s, params),
                                 null_route_tortoise_velocity(rho2, r2s, params)};
  };

  ode::Rhs<2> rhs = [&](double t, const ode::State<2>& y) {
    return tortoise_pair_velocity(t, y[0], y[1]);
  };

  bundle.trajectories.reserve(2 * pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto run = ode::integrate<2>(rhs, config.t0, config.t1,
                                       ode::State<2>{pairs[p].first, pairs[p].second},
                                       bundle.sample_times, ctrl);
    const auto status = (run.reason == ode::StopReason::Completed)
                            ? TrajectoryStatus::Completed
                            : TrajectoryStatus::NodeAborted;
    for (int photon = 0; photon < 2; ++photon) {
      Trajectory traj;
      traj.id = static_cast<int>(2 * p) + photon;
      traj.status = status;
      traj.note = run.note;
      traj.samples.reserve(run.t.size());
      for (std::size_t i = 0; i < run.t.size(); ++i) {
        const TwoPhotonEvent ev{RadialEvent{run.t[i], 0.0, run.y[i][0]},
                                RadialEvent{run.t[i], 0.0, run.y[i][1]}};
        const auto j = two_photon_currents(ev, spec);
        TrajectorySample s;
        s.t = run.t[i];
        s.r_star = photon == 0 ? ev.r1.r_star : ev.r2.r_star;
        s.r = radial_from_tortoise(s.r_star, params);
        s.j0 = photon == 0 ? j.j1_0 : j.j2_0;
        s.j1 = photon == 0 ? j.j1_1 : j.j2_1;
        const double f = metric_factor(s.r, params);
        s.v = (std::abs(s.j0) >= bundle.node_floor)
                  ? f * (s.j1 / s.j0)
                  : std::numeric_limits<double>::quiet_NaN();
        traj.samples.push_back(s);
      }
      traj.status = classify_end(traj, params);
      bundle.trajectories.push_back(std::move(traj));
    }
    if (status == TrajectoryStatus::NodeAborted) bundle.n_not_completed += 2;
  }
  return bundle;
}

std::vector<FieldPoint> density_grid_single(double t, const Window& window,
                                            int resolution,
                                            const WavepacketSpec& spec,
                                            const SpacetimeParams& params,
                                            double node_floor) {
  if (resolution < 2) {
    throw std::invalid_argument("density_grid_single: resolution must be >= 2");
  }
  const auto xs = linspace(window.lo, window.hi, resolution);
  std::vector<FieldPoint> out;
  out.reserve(xs.size());
  for (double x : xs) {
    FieldPoint p;
    p.r_star = x;
    p.r = radial_from_tortoise(x, params);
    const CurrentSample j = single_current(t, x, spec);
    p.j0 = j.j0;
    p.j1 = j.j1;
    const double f = metric_factor(p.r, params);
    p.v = (std::abs(j.j0) >= node_floor)
              ? f * j.ratio()
              : std::numeric_limits<double>::quiet_NaN();
    out.push_back(p);
  }
  return out;
}

std::vector<JointDensityPoint> density_grid_two(double t, const Window& window,
                                                int resolution,
                                                const WavepacketSpec& spec) {
  if (resolution < 2) {
    throw std::invalid_argument("density_grid_two: resolution must be >= 2");
  }
  const auto xs = linspace(window.lo, window.hi, resolution);
  std::vector<JointDensityPoint> out;
  out.reserve(xs.size() * xs.size());
  for (double a : xs) {
    for (double b : xs) {
      const TwoPhotonEvent ev{RadialEvent{t, 0.0, a}, RadialEvent{t, 0.0, b}};
      out.push_back({a, b, std::norm(two_photon_psi(ev, spec))});
    }
  }
  return out;
}

}  // namespace bhflow
