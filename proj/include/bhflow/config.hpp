#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bhflow/dynamics.hpp"

namespace bhflow {

enum class Scenario { Single, TwoPhoton, Field, Verify };

std::string to_string(Scenario s);
std::string to_string(SamplingStrategy s);
std::string to_string(RouteKind r);
std::string to_string(TwoPhotonDensity d);

/// Fully resolved run configuration. All lengths are geometric; sigma sets
/// the packet scale and k0 is specified through the ratio k0/sigma.
struct RunConfig {
  Scenario scenario = Scenario::Single;
  double mass = 1.0;
  double k0_over_sigma = 15.0;
  double sigma = 1.0;
  double alpha = 0.5;
  double t0 = -2.0;
  double t1 = 2.0;
  int n_traj = 200;
  std::uint64_t seed = 0;
  SamplingStrategy sampling = SamplingStrategy::QuantileStratified;
  RouteKind route = RouteKind::KgCurrent;
  std::string window = "auto";  // "auto" or "lo:hi"
  int resolution = 2048;
  int store_points = 61;
  int two_photon_grid = 201;
  TwoPhotonDensity two_photon_density = TwoPhotonDensity::PsiSquared;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double node_floor_scale = 1e-12;
  std::string output_dir = "out";

  WavepacketSpec wavepacket() const;
  SpacetimeParams spacetime() const;
  EnsembleConfig ensemble() const;
  std::optional<Window> parsed_window() const;
  void validate() const;

  /// Key/value view of every setting, in a stable order.
  std::vector<std::pair<std::string, std::string>> items() const;
};

/// Applies one key = value setting with full validation. context prefixes
/// error messages (e.g. "config.txt:3" or "--alpha").
void apply_key(RunConfig& config, const std::string& key,
               const std::string& value, const std::string& context);

/// Parses a flat key = value file ('#' comments, blank lines allowed).
/// Unknown keys and out-of-range values raise ConfigError naming the key,
/// line and accepted range.
RunConfig parse_config_file(const std::string& path);

}  // namespace bhflow
