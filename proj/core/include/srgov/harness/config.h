#pragma once

// Run configuration: a flat `key = value` text format with `#` comments.
// Every key may also be set through the environment as SRGOV_<KEY> in upper
// case; environment values override the file.
//
// List values are comma separated; waypoints are `x,y,z` triples separated
// by `;`, e.g. `waypoints = 1,1,1; 5,5,5`.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srgov/control.h"
#include "srgov/governor.h"
#include "srgov/plant.h"
#include "srgov/sac/agent.h"
#include "srgov/srsm.h"

namespace srgov {
namespace harness {

inline constexpr const char* kEnvPrefix = "SRGOV_";

/// SAC settings for mission training: the entropy target is low enough for
/// the deterministic action to reach the top of its range.
inline sac::SacConfig MissionSacConfig() {
  sac::SacConfig c;
  c.target_entropy = -8.0;
  return c;
}

struct RunConfig {
  plant::QuadParams quad;
  plant::NoiseStd noise;
  control::QuadWeightConfig weights;
  double rho_s = 0.0012;
  double rho_m = 0.01;
  double d_safe = 1.0;  // m
  srsm::SRConfig sr;
  governor::Mission mission;
  double alpha_max = governor::kDefaultAlphaMax;
  governor::PolicyKind policy = governor::PolicyKind::kBaseline;
  sac::SacConfig sac = MissionSacConfig();
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int trace_every = 10;  // record every n-th dt sample
  int max_cycles = 200;
  // Training flies one deterministic validation mission every this many
  // episodes and keeps the fastest safe snapshot; 0 keeps the final agent.
  int validate_every = 5;

  /// Throws ConfigError describing the first invalid value.
  void Validate() const;
};

/// Sorted list of every accepted key.
std::vector<std::string> ConfigKeys();

/// Sets one key. Throws ConfigError for an unknown key or unparsable value.
void SetKey(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies `key = value` lines. `source` names the origin in diagnostics.
/// Throws ConfigError on malformed lines, unknown or repeated keys.
void ApplyConfigText(RunConfig& cfg, const std::string& text,
                     const std::string& source);

/// Throws IoError if the file cannot be read, ConfigError as above.
void ApplyConfigFile(RunConfig& cfg, const std::string& path);

/// Applies SRGOV_<KEY> variables for every known key.
void ApplyEnvironment(RunConfig& cfg);

/// Every key with its current value, formatted so that ApplyConfigText
/// reads it back to the same configuration.
std::map<std::string, std::string> ConfigValues(const RunConfig& cfg);
std::string DumpConfig(const RunConfig& cfg);

std::string ToString(governor::PolicyKind kind);

}  // namespace harness
}  // namespace srgov
