#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bhflow/currents.hpp"
#include "bhflow/geometry.hpp"
#include "bhflow/wavefunction.hpp"

namespace bhflow {

enum class SamplingStrategy { QuantileStratified, Pseudorandom };
enum class RouteKind { KgCurrent, MetricNull };
enum class TrajectoryStatus { Completed, NodeAborted, HorizonAsymptotic };
enum class TwoPhotonDensity { PsiSquared, J0Weighted };

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Symmetric tortoise window generously covering the packet envelopes over
/// the whole integration span.
Window default_window(const WavepacketSpec& spec, double t0, double t1);

struct IntegratorTolerances {
  double rel = 1e-9;
  double abs = 1e-12;
};

struct TrajectorySample {
  double t = 0.0;
  double r_star = 0.0;
  double r = 0.0;
  double v = 0.0;   // coordinate velocity dr/dt via the configured route
  double j0 = 0.0;
  double j1 = 0.0;
};

struct Trajectory {
  int id = 0;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  std::vector<TrajectorySample> samples;
  std::string note;
};

struct EnsembleConfig {
  int n_traj = 200;
  double t0 = -2.0;
  double t1 = 2.0;
  std::uint64_t seed = 0;
  SamplingStrategy sampling = SamplingStrategy::QuantileStratified;
  RouteKind route = RouteKind::KgCurrent;
  int store_points = 61;
  int resolution = 2048;
  std::optional<Window> window;
  IntegratorTolerances tol;
  /// Node floor as a fraction of the sampling grid's density maximum.
  double node_floor_scale = 1e-12;
  TwoPhotonDensity two_photon_density = TwoPhotonDensity::PsiSquared;
};

struct TrajectoryBundle {
  std::vector<Trajectory> trajectories;
  std::vector<double> sample_times;
  Window window;
  double node_floor = 0.0;
  int n_not_completed = 0;
};

/// Tabulated density with a cumulative distribution for inverse sampling.
/// Negative excursions of the density (shallow interference dips) are
/// clamped to zero for the CDF.
struct TabulatedDensity {
  std::vector<double> x;
  std::vector<double> density;
  std::vector<double> cdf;  // unnormalised, cdf.back() = total mass

  double total() const { return cdf.back(); }
  /// x at which the normalised CDF reaches q (0 <= q <= 1).
  double quantile(double q) const;
  /// Normalised CDF value at position (linear interpolation).
  double cdf_at(double pos) const;
};

TabulatedDensity tabulate_density_single(double t, const WavepacketSpec& spec,
                                         const Window& window, int resolution);

/// Initial tortoise positions distributed per the normalised density
/// j0(t0, .). Throws WindowTooSmallError if more than 1e-6 of the analytic
/// mass lies outside the window. Deterministic in (seed, strategy, n).
std::vector<double> sample_initial_single(double t0, const WavepacketSpec& spec,
                                          int n, SamplingStrategy strategy,
                                          std::uint64_t seed, const Window& window,
                                          int resolution);

/// Initial pairs from the normalised joint density at the common time t0
/// (|psi_M|^2 by default), via marginal-then-conditional CDF inversion.
std::vector<std::pair<double, double>> sample_initial_two(
    double t0, const WavepacketSpec& spec, int n, SamplingStrategy strategy,
    std::uint64_t seed, const Window& window, int resolution,
    TwoPhotonDensity density = TwoPhotonDensity::PsiSquared);

/// Single-photon tortoise-velocity field for one route. node_floor applies
/// to |j0|.
struct VelocityField {
  const WavepacketSpec* spec;
  const SpacetimeParams* params;
  RouteKind route;
  double node_floor;

  /// dr_star/dt; throws NodeProximityError below the floor.
  double operator()(double t, double r_star) const;
};

Trajectory integrate_trajectory(double r_star0, double t0, double t1,
                                const VelocityField& field,
                                const std::vector<double>& sample_times,
                                const IntegratorTolerances& tol, int id = 0);

TrajectoryBundle run_ensemble(const EnsembleConfig& config,
                              const WavepacketSpec& spec,
                              const SpacetimeParams& params);

/// Coupled integration of a pair on the common timeslice; emits two
/// trajectories (photon 1 then photon 2) per pair.
TrajectoryBundle run_ensemble_two(const EnsembleConfig& config,
                                  const WavepacketSpec& spec,
                                  const SpacetimeParams& params);

struct FieldPoint {
  double r_star = 0.0;
  double r = 0.0;
  double j0 = 0.0;
  double j1 = 0.0;
  double v = 0.0;  // NaN where |j0| is under the node floor
};

std::vector<FieldPoint> density_grid_single(double t, const Window& window,
                                            int resolution,
                                            const WavepacketSpec& spec,
                                            const SpacetimeParams& params,
                                            double node_floor);

struct JointDensityPoint {
  double r1_star = 0.0;
  double r2_star = 0.0;
  double density = 0.0;
};

std::vector<JointDensityPoint> density_grid_two(double t, const Window& window,
                                                int resolution,
                                                const WavepacketSpec& spec);

}  // namespace bhflow
