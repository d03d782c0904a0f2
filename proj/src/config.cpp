#include "bhflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bhflow/errors.hpp"

namespace bhflow {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value,
                    const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, context + ": value '" + value + "' for key '" + key +
                               "' is not a number");
  }
}

long long parse_int(const std::string& key, const std::string& value,
                    const std::string& context) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, context + ": value '" + value + "' for key '" + key +
                               "' is not an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value,
                        const std::string& context) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, context + ": value '" + value + "' for key '" + key +
                               "' is not a non-negative integer");
  }
}

[[noreturn]] void range_error(const std::string& key, const std::string& context,
                              const std::string& accepted) {
  throw ConfigError(key, context + ": key '" + key + "' out of range; accepted: " +
                             accepted);
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Single: return "single";
    case Scenario::TwoPhoton: return "two-photon";
    case Scenario::Field: return "field";
    case Scenario::Verify: return "verify";
  }
  return "unknown";
}

std::string to_string(SamplingStrategy s) {
  return s == SamplingStrategy::QuantileStratified ? "quantile" : "pseudorandom";
}

std::string to_string(RouteKind r) {
  return r == RouteKind::KgCurrent ? "kg-current" : "metric-null";
}

std::string to_string(TwoPhotonDensity d) {
  return d == TwoPhotonDensity::PsiSquared ? "psi-squared" : "j0-weighted";
}

WavepacketSpec RunConfig::wavepacket() const {
  WavepacketSpec spec;
  spec.sigma = sigma;
  spec.k0 = k0_over_sigma * sigma;
  spec.alpha = alpha;
  return spec;
}

SpacetimeParams RunConfig::spacetime() const { return SpacetimeParams{mass}; }

std::optional<Window> RunConfig::parsed_window() const {
  if (window == "auto") return std::nullopt;
  const auto colon = window.find(':');
  const double lo = std::stod(window.substr(0, colon));
  const double hi = std::stod(window.substr(colon + 1));
  return Window{lo, hi};
}

EnsembleConfig RunConfig::ensemble() const {
  EnsembleConfig cfg;
  cfg.n_traj = n_traj;
  cfg.t0 = t0;
  cfg.t1 = t1;
  cfg.seed = seed;
  cfg.sampling = sampling;
  cfg.route = route;
  cfg.store_points = store_points;
  cfg.resolution = resolution;
  cfg.window = parsed_window();
  cfg.tol = IntegratorTolerances{rel_tol, abs_tol};
  cfg.node_floor_scale = node_floor_scale;
  cfg.two_photon_density = two_photon_density;
  return cfg;
}

void RunConfig::validate() const {
  const std::string ctx = "config";
  if (!(mass >= 0.0) || !std::isfinite(mass)) range_error("mass", ctx, "mass >= 0");
  if (!(sigma > 0.0)) range_error("sigma", ctx, "sigma > 0");
  if (!(k0_over_sigma > 0.0)) range_error("k0_over_sigma", ctx, "> 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) range_error("alpha", ctx, "[0, 1]");
  if (!(t1 > t0)) range_error("t1", ctx, "t1 > t0");
  if (n_traj < 1) range_error("n_traj", ctx, ">= 1");
  if (resolution < 16) range_error("resolution", ctx, ">= 16");
  if (store_points < 2) range_error("store_points", ctx, ">= 2");
  if (two_photon_grid < 2) range_error("two_photon_grid", ctx, ">= 2");
  if (!(rel_tol > 0.0)) range_error("rel_tol", ctx, "> 0");
  if (!(abs_tol >= 0.0)) range_error("abs_tol", ctx, ">= 0");
  if (!(node_floor_scale >= 0.0)) range_error("node_floor_scale", ctx, ">= 0");
  if (window != "auto") {
    const auto colon = window.find(':');
    bool ok = colon != std::string::npos;
    if (ok) {
      try {
        const double lo = std::stod(window.substr(0, colon));
        const double hi = std::stod(window.substr(colon + 1));
        ok = hi > lo;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) range_error("window", ctx, "'auto' or 'lo:hi' with hi > lo");
  }
  if (output_dir.empty()) range_error("out", ctx, "non-empty path");
}

void apply_key(RunConfig& config, const std::string& key,
               const std::string& value, const std::string& context) {
  if (key == "scenario") {
    if (value == "single") config.scenario = Scenario::Single;
    else if (value == "two-photon") config.scenario = Scenario::TwoPhoton;
    else if (value == "field") config.scenario = Scenario::Field;
    else if (value == "verify") config.scenario = Scenario::Verify;
    else range_error(key, context, "single | two-photon | field | verify");
  } else if (key == "mass") {
    config.mass = parse_double(key, value, context);
    if (!(config.mass >= 0.0)) range_error(key, context, "mass >= 0");
  } else if (key == "k0_over_sigma") {
    config.k0_over_sigma = parse_double(key, value, context);
    if (!(config.k0_over_sigma > 0.0)) range_error(key, context, "> 0");
  } else if (key == "sigma") {
    config.sigma = parse_double(key, value, context);
    if (!(config.sigma > 0.0)) range_error(key, context, "> 0");
  } else if (key == "alpha") {
    config.alpha = parse_double(key, value, context);
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
      range_error(key, context, "[0, 1]");
    }
  } else if (key == "t0") {
    config.t0 = parse_double(key, value, context);
  } else if (key == "t1") {
    config.t1 = parse_double(key, value, context);
  } else if (key == "n_traj") {
    const auto v = parse_int(key, value, context);
    if (v < 1 || v > 10'000'000) range_error(key, context, "[1, 1e7]");
    config.n_traj = static_cast<int>(v);
  } else if (key == "seed") {
    config.seed = parse_u64(key, value, context);
  } else if (key == "sampling") {
    if (value == "quantile") config.sampling = SamplingStrategy::QuantileStratified;
    else if (value == "pseudorandom") config.sampling = SamplingStrategy::Pseudorandom;
    else range_error(key, context, "quantile | pseudorandom");
  } else if (key == "route") {
    if (value == "kg-current") config.route = RouteKind::KgCurrent;
    else if (value == "metric-null") config.route = RouteKind::MetricNull;
    else range_error(key, context, "kg-current | metric-null");
  } else if (key == "window") {
    config.window = value;
  } else if (key == "resolution") {
    const auto v = parse_int(key, value, context);
    if (v < 16 || v > 1'000'000) range_error(key, context, "[16, 1e6]");
    config.resolution = static_cast<int>(v);
  } else if (key == "store_points") {
    const auto v = parse_int(key, value, context);
    if (v < 2 || v > 100'000) range_error(key, context, "[2, 1e5]");
    config.store_points = static_cast<int>(v);
  } else if (key == "two_photon_grid") {
    const auto v = parse_int(key, value, context);
    if (v < 2 || v > 4096) range_error(key, context, "[2, 4096]");
    config.two_photon_grid = static_cast<int>(v);
  } else if (key == "two_photon_density") {
    if (value == "psi-squared") config.two_photon_density = TwoPhotonDensity::PsiSquared;
    else if (value == "j0-weighted") config.two_photon_density = TwoPhotonDensity::J0Weighted;
    else range_error(key, context, "psi-squared | j0-weighted");
  } else if (key == "rel_tol") {
    config.rel_tol = parse_double(key, value, context);
    if (!(config.rel_tol > 0.0)) range_error(key, context, "> 0");
  } else if (key == "abs_tol") {
    config.abs_tol = parse_double(key, value, context);
    if (!(config.abs_tol >= 0.0)) range_error(key, context, ">= 0");
  } else if (key == "node_floor_scale") {
    config.node_floor_scale = parse_double(key, value, context);
    if (!(config.node_floor_scale >= 0.0)) range_error(key, context, ">= 0");
  } else if (key == "out") {
    config.output_dir = value;
  } else {
    throw ConfigError(key, context + ": unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", "cannot open config file '" + path + "'");
  }
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string context = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw ConfigError("config", context + ": expected 'key = value'");
    }
    apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), context);
  }
  return config;
}

std::vector<std::pair<std::string, std::string>> RunConfig::items() const {
  return {
      {"scenario", to_string(scenario)},
      {"mass", format_g(mass)},
      {"k0_over_sigma", format_g(k0_over_sigma)},
      {"sigma", format_g(sigma)},
      {"alpha", format_g(alpha)},
      {"t0", format_g(t0)},
      {"t1", format_g(t1)},
      {"n_traj", std::to_string(n_traj)},
      {"seed", std::to_string(seed)},
      {"sampling", to_string(sampling)},
      {"route", to_string(route)},
      {"window", window},
      {"resolution", std::to_string(resolution)},
      {"store_points", std::to_string(store_points)},
      {"two_photon_grid", std::to_string(two_photon_grid)},
      {"two_photon_density", to_string(two_photon_density)},
      {"rel_tol", format_g(rel_tol)},
      {"abs_tol", format_g(abs_tol)},
      {"node_floor_scale", format_g(node_floor_scale)},
      {"out", output_dir},
  };
}

}  // namespace bhflow
