#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "bhflow/config.hpp"
#include "bhflow/errors.hpp"

using namespace bhflow;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string("/tmp/bhflow_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal file gets defaults filled in") {
  const auto path = write_temp("minimal.cfg",
                               "# minimal run\n"
                               "scenario = single\n"
                               "alpha = 0.5\n");
  const auto cfg = parse_config_file(path);
  CHECK(cfg.scenario == Scenario::Single);
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.mass == 1.0);
  CHECK(cfg.k0_over_sigma == 15.0);
  CHECK(cfg.seed == 0);
  CHECK(cfg.sampling == SamplingStrategy::QuantileStratified);
  CHECK(cfg.route == RouteKind::KgCurrent);
  cfg.validate();
}

TEST_CASE("out-of-range alpha names the key and range") {
  const auto path = write_temp("alpha.cfg", "alpha = 1.5\n");
  try {
    parse_config_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "alpha");
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    CHECK(std::string(e.what()).find("[0, 1]") != std::string::npos);
    CHECK(std::string(e.what()).find(":1") != std::string::npos);  // line number
  }
}

TEST_CASE("unknown keys are rejected by name") {
  const auto path = write_temp("unknown.cfg",
                               "alpha = 0.25\n"
                               "warp_factor = 9\n");
  try {
    parse_config_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "warp_factor");
    CHECK(std::string(e.what()).find("warp_factor") != std::string::npos);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("malformed lines carry the location") {
  const auto path = write_temp("broken.cfg", "alpha 0.5\n");
  CHECK_THROWS_AS(parse_config_file(path), ConfigError);
}

TEST_CASE("window parsing") {
  RunConfig cfg;
  apply_key(cfg, "window", "-4.5:4.5", "test");
  cfg.validate();
  const auto w = cfg.parsed_window();
  REQUIRE(w.has_value());
  CHECK(w->lo == -4.5);
  CHECK(w->hi == 4.5);

  apply_key(cfg, "window", "5:1", "test");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("enumerations round-trip through apply_key") {
  RunConfig cfg;
  apply_key(cfg, "sampling", "pseudorandom", "test");
  CHECK(cfg.sampling == SamplingStrategy::Pseudorandom);
  apply_key(cfg, "route", "metric-null", "test");
  CHECK(cfg.route == RouteKind::MetricNull);
  apply_key(cfg, "two_photon_density", "j0-weighted", "test");
  CHECK(cfg.two_photon_density == TwoPhotonDensity::J0Weighted);
  CHECK_THROWS_AS(apply_key(cfg, "route", "teleport", "test"), ConfigError);
}

TEST_CASE("items view lists every key once") {
  RunConfig cfg;
  const auto items = cfg.items();
  CHECK(items.size() == 20);
  for (const auto& [key, value] : items) {
    RunConfig probe;
    if (key == "scenario") continue;  // set by subcommand, still applyable
    CHECK_NOTHROW(apply_key(probe, key, value, "roundtrip"));
  }
}

TEST_CASE("ensemble view carries the tolerances and window through") {
  RunConfig cfg;
  apply_key(cfg, "rel_tol", "1e-8", "test");
  apply_key(cfg, "abs_tol", "1e-11", "test");
  apply_key(cfg, "window", "-2:9", "test");
  const auto ens = cfg.ensemble();
  CHECK(ens.tol.rel == 1e-8);
  CHECK(ens.tol.abs == 1e-11);
  REQUIRE(ens.window.has_value());
  CHECK(ens.window->hi == 9.0);
}

TEST_SUITE_END();
