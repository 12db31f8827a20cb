#pragma once

// YAML run configuration. The grammar (every key, default and unit) is
// documented in README.md; defaults reproduce the reference device.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtnv/lattice.hpp"
#include "mtnv/lindblad.hpp"
#include "mtnv/params.hpp"
#include "mtnv/protocols.hpp"
#include "mtnv/pulse.hpp"

namespace mtnv::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Study { kLattice, kRabi, kDirect, kDark };

std::string to_string(Study s);
/// Throws ConfigError for an unknown name.
Study study_from_string(const std::string& name);

struct LatticeStudy {
  lattice::LatticeConfig config;
  std::size_t theta_points = 64;
  double theta_min = 0.0;
  double theta_max = 0.0;
  /// Working point for the coupling constant g.
  double theta0 = 0.0;
};

struct Sweep {
  std::string parameter;  // dotted path
  std::vector<std::string> values;  // YAML scalars as written
};

struct NamedSource {
  std::string name;
  protocols::SourceState state;
};

struct RunConfig {
  Study study = Study::kDark;
  std::string run_name;
  std::filesystem::path output_dir = "out";

  LatticeStudy lattice;
  params::CantileverParams device;
  params::CouplingParams couplings;  // units of g0
  double n_th = 0.0;
  double g0_hz = 0.0;                // physical g0 / 2 pi, metadata only

  std::size_t fock_dim = 10;
  std::size_t samples = 400;
  double rabi_horizon = 10.0;
  lindblad::IntegratorOptions integrator;

  PulseSchedule g_schedule;
  PulseSchedule lambda_schedule;
  double window_start = 0.0;
  double window_end = 0.0;
  std::vector<NamedSource> sources;

  std::optional<Sweep> sweep;
  /// Fully resolved configuration (defaults, file, overrides) as YAML.
  std::string resolved_yaml;
};

/// Parses `text` over the defaults, then applies `key=value` overrides and
/// an optional study name. Throws ConfigError naming the offending key, or
/// the line of a malformed value.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {},
                       const std::optional<std::string>& study = std::nullopt);

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {},
                      const std::optional<std::string>& study = std::nullopt);

/// One config per sweep value, named <run_name>_<index>; a config without
/// a sweep expands to itself.
std::vector<RunConfig> expand_sweep(const RunConfig& cfg);

/// The resolved defaults as YAML text.
std::string default_config_yaml();

}  // namespace mtnv::config
