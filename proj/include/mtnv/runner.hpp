#pragma once

// Executes a RunConfig and writes CSV tables plus a <run>.meta.json sidecar.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mtnv/config.hpp"

namespace mtnv::runner {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIntegrationFailure = 2,
  kNotTopological = 3,
  kInternalError = 4,
};

struct RunOutcome {
  int exit_code = kOk;
  std::string run_name;
  std::vector<std::filesystem::path> files;
  std::string error;
};

/// Runs one configuration (sweep points included). Errors never escape:
/// they become an exit code and a <run>.error.json record.
RunOutcome run_single(const config::RunConfig& cfg);

/// Expands the sweep and runs every point, `parallel` at a time. Returns the
/// largest exit code.
int run(const config::RunConfig& cfg, std::size_t parallel = 1,
        std::vector<RunOutcome>* outcomes = nullptr);

/// Fixed-format number used in every CSV cell.
std::string format_number(double v);

}  // namespace mtnv::runner
