#include <doctest.h>

#include <cmath>

#include "bhflow/verify.hpp"

using namespace bhflow;
using namespace bhflow::verify;

namespace {

WavepacketSpec spec15(double alpha) { return WavepacketSpec{15.0, 1.0, alpha}; }
WavepacketSpec spec20(double alpha) { return WavepacketSpec{20.0, 1.0, alpha}; }

GridSpec small_grid() {
  GridSpec g;
  g.nt = 8;
  g.nx = 8;
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("single-photon equivalence check passes for representative alpha") {
  const SpacetimeParams m1{1.0};
  QuadratureConfig quad;
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto rep =
        check_weakvalue_kg_equivalence(spec15(alpha), m1, small_grid(), quad);
    CHECK(rep.status == CheckStatus::Pass);
    CHECK(rep.max_error <= rep.tolerance);
    CHECK(rep.probe_count > 0);
  }
}

TEST_CASE("corrupted sign convention is caught (negative control)") {
  const SpacetimeParams m1{1.0};
  QuadratureConfig quad;
  const auto spec = spec15(0.5);
  auto corrupted = [&](double t, double x) {
    return -single_current(t, x, spec).ratio();  // flipped current sign
  };
  const auto rep =
      check_weakvalue_kg_equivalence(spec, m1, small_grid(), quad, corrupted);
  CHECK(rep.status == CheckStatus::Fail);
}

TEST_CASE("two-photon equivalence and exchange checks") {
  const auto rep = check_weakvalue_kg_equivalence_two(spec20(0.5), 300, 5,
                                                      {-1.0, 0.0});
  CHECK(rep.status == CheckStatus::Pass);
  CHECK(rep.max_error <= 1e-10);

  const auto ex = check_exchange_symmetry(spec20(0.5), 300, 6);
  CHECK(ex.status == CheckStatus::Pass);
}

TEST_CASE("route equivalence and null interval on a small ensemble") {
  const SpacetimeParams m1{1.0};
  const auto spec = spec15(0.5);
  EnsembleConfig cfg;
  cfg.n_traj = 24;
  cfg.t0 = -2.0;
  cfg.t1 = 2.0;
  cfg.store_points = 17;

  const auto route = check_null_geodesic_equivalence(spec, m1, cfg);
  CHECK(route.status == CheckStatus::Pass);

  const auto bundle = run_ensemble(cfg, spec, m1);
  const auto null_rep = check_null_interval(bundle, m1);
  CHECK(null_rep.interval.status == CheckStatus::Pass);
  CHECK(null_rep.interval.max_error <= 1e-10);
  CHECK(null_rep.determinant.status == CheckStatus::Pass);
  CHECK(null_rep.determinant.max_error <= 1e-12);
}

TEST_CASE("flat-space route equivalence (massless limit)") {
  const SpacetimeParams flat{0.0};
  const auto spec = spec15(0.5);
  EnsembleConfig cfg;
  cfg.n_traj = 12;
  cfg.t0 = -1.0;
  cfg.t1 = 1.0;
  cfg.store_points = 9;
  const auto rep = check_null_geodesic_equivalence(spec, flat, cfg);
  CHECK(rep.status == CheckStatus::Pass);
}

TEST_CASE("reference-form audit: radial passes, density is documented") {
  const auto audit = check_reference_forms_single(spec15(0.5), small_grid());
  CHECK(audit.j1.status == CheckStatus::Pass);
  CHECK(audit.j0.status == CheckStatus::DiscrepancyDocumented);
  CHECK(audit.j0_map.size() == 64);
  CHECK(!audit.j0.notes.empty());

  const auto two = check_reference_forms_two(spec20(0.5), 100, 7);
  CHECK(two.status == CheckStatus::Pass);
}

TEST_CASE("continuity convergence orders") {
  const auto balanced = check_continuity_single(spec15(0.5), 12, 8, 1e-3);
  CHECK(balanced.status == CheckStatus::Pass);

  const auto pure = check_continuity_single(spec15(1.0), 12, 9, 1e-3);
  CHECK(pure.status == CheckStatus::Pass);

  const auto two = check_continuity_two(spec20(0.5), 8, 10, 1e-3);
  CHECK(two.status == CheckStatus::Pass);
}

TEST_CASE("suite runs deterministically with one documented discrepancy") {
  SuiteConfig cfg;
  cfg.alpha_set = {0.5};
  cfg.equivalence_events = 100;
  cfg.exchange_events = 100;
  cfg.continuity_probes = 8;
  cfg.route_ensemble.n_traj = 16;
  cfg.route_ensemble.t0 = -1.5;
  cfg.route_ensemble.t1 = 1.5;
  cfg.route_ensemble.store_points = 11;

  const auto a = run_suite(cfg);
  const auto b = run_suite(cfg);
  REQUIRE(a.reports.size() == b.reports.size());
  int discrepancies = 0;
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].name == b.reports[i].name);
    CHECK(a.reports[i].max_error == b.reports[i].max_error);  // bitwise
    CHECK(a.reports[i].status != CheckStatus::Fail);
    if (a.reports[i].status == CheckStatus::DiscrepancyDocumented) ++discrepancies;
  }
  CHECK(discrepancies == 1);
  CHECK(!a.any_failed());
  CHECK(!a.j0_deviation_map.empty());
}

TEST_SUITE_END();
