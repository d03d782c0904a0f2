#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bhflow/dynamics.hpp"
#include "bhflow/weakvalues.hpp"

namespace bhflow::verify {

enum class CheckStatus { Pass, Fail, DiscrepancyDocumented };

std::string to_string(CheckStatus status);

/// One verification outcome. status == Pass exactly when
/// max_error <= tolerance; DiscrepancyDocumented marks a faithful
/// reproduction of a cross-check target that is known not to match.
struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double max_error = 0.0;
  double tolerance = 0.0;
  long probe_count = 0;
  std::string notes;
};

struct GridSpec {
  double t_lo = -2.0;
  double t_hi = 2.0;
  double x_lo = -3.0;
  double x_hi = 3.0;
  int nt = 20;
  int nx = 20;
};

struct DeviationRecord {
  double t = 0.0;
  double r_star = 0.0;
  double derived = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
};

/// Pointwise comparison of the weak-value velocity f * p_w / h_w against the
/// conserved-current velocity f * j1/j0 over the grid, restricted to points
/// with density above 1e-8 of the grid peak. kg_ratio_override substitutes
/// the current-route ratio (test hook for negative controls).
CheckReport check_weakvalue_kg_equivalence(
    const WavepacketSpec& spec, const SpacetimeParams& params,
    const GridSpec& grid, const QuadratureConfig& quad,
    std::function<double(double, double)> kg_ratio_override = {});

/// Identity between the detector product forms and the two conserved
/// currents on a common timeslice, at seeded random events. If times is
/// non-empty the slices cycle through it; otherwise they are drawn
/// uniformly.
CheckReport check_weakvalue_kg_equivalence_two(const WavepacketSpec& spec,
                                               int n_events, std::uint64_t seed,
                                               const std::vector<double>& times = {});

/// Exchange symmetry j_1^mu(R1,R2) = j_2^mu(R2,R1) at seeded random event
/// pairs with general two-time arguments.
CheckReport check_exchange_symmetry(const WavepacketSpec& spec, int n_events,
                                    std::uint64_t seed);

/// Integrates the same ensemble through the conserved-current route and the
/// guiding-metric null-geodesic route and reports the worst |delta r_star|.
CheckReport check_null_geodesic_equivalence(const WavepacketSpec& spec,
                                            const SpacetimeParams& params,
                                            const EnsembleConfig& config);

/// Null-interval residual of the hybrid metric along completed trajectories,
/// with the shift reconstructed from the stored currents; also audits the
/// 2D metric determinant against -1.
struct NullIntervalReport {
  CheckReport interval;
  CheckReport determinant;
};
NullIntervalReport check_null_interval(const TrajectoryBundle& bundle,
                                       const SpacetimeParams& params);

/// Cross-check of the derivation-based currents against the independently
/// stated reference closed forms at alpha = 1/2. The radial comparison is
/// expected to match; the density comparison reproduces a known mismatch and
/// is reported as discrepancy-documented together with its deviation map.
struct ReferenceFormAudit {
  CheckReport j1;
  CheckReport j0;
  std::vector<DeviationRecord> j0_map;
};
ReferenceFormAudit check_reference_forms_single(const WavepacketSpec& spec,
                                                const GridSpec& grid);

CheckReport check_reference_forms_two(const WavepacketSpec& spec,
                                      int n_events, std::uint64_t seed);

/// Richardson convergence of the continuity residual under h-halving at
/// seeded probe points; passes when every probe shows order >= 1.8 (or sits
/// at the rounding floor).
CheckReport check_continuity_single(const WavepacketSpec& spec, int n_probes,
                                    std::uint64_t seed, double h);
CheckReport check_continuity_two(const WavepacketSpec& spec, int n_probes,
                                 std::uint64_t seed, double h);

struct SuiteConfig {
  double sigma = 1.0;
  double mass = 1.0;
  double k0_over_sigma_single = 15.0;
  std::vector<double> alpha_set = {0.5, 0.75, 1.0};
  double k0_over_sigma_two = 20.0;
  std::vector<double> two_photon_times = {-1.0, 0.0};
  std::uint64_t seed = 0;
  int equivalence_events = 1000;
  int exchange_events = 1000;
  int continuity_probes = 20;
  double continuity_h = 1e-3;
  EnsembleConfig route_ensemble = [] {
    EnsembleConfig c;
    c.n_traj = 200;
    c.t0 = -3.0;
    c.t1 = 3.0;
    return c;
  }();
  QuadratureConfig quad{};
};

struct SuiteResult {
  std::vector<CheckReport> reports;
  std::vector<DeviationRecord> j0_deviation_map;

  bool any_failed() const;
};

/// Runs every check family at the standard parameter points.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace bhflow::verify
