#pragma once

#include <string>
#include <vector>

#include "bhflow/config.hpp"

namespace bhflow {

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string error;
};

/// Executes the configured scenario and writes trajectories.csv,
/// density.csv, report.json and manifest.json (as applicable) under
/// config.output_dir. Returns 0 when no verification check failed;
/// discrepancy-documented does not fail. On error, partial outputs are
/// preserved and the failure is recorded in the manifest.
RunOutcome run(const RunConfig& config);

}  // namespace bhflow
