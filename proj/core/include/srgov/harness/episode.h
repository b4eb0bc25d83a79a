#pragma once

#include <cstdint>
#include <vector>

#include "srgov/governor.h"
#include "srgov/harness/mdp.h"

namespace srgov {
namespace harness {

struct EpisodeOptions {
  int max_cycles = 200;
  int trace_every = 0;
  bool keep_traces = false;
  bool deterministic = true;  // learned policies use the squashed mean
};

struct EpisodeResult {
  double mission_time = 0.0;  // s, sum of cycle durations
  std::int64_t total_steps = 0;
  int cycles = 0;
  bool success = false;
  Outcome outcome = Outcome::kRunning;
  double total_reward = 0.0;
  std::vector<CycleRecord> records;
  std::vector<srsm::CycleTrace> traces;  // filled when keep_traces
};

/// Runs one mission under `policy`. Measurement noise comes from stream
/// kPlantNoise of `seed` and learned-policy draws from stream kPolicy.
EpisodeResult RunEpisode(const srsm::LoopSetup& setup,
                         const governor::Mission& mission,
                         const governor::AlphaPolicy& policy,
                         const EpisodeOptions& options, std::uint64_t seed);

/// Convenience overload that designs the loop from `cfg` and uses its
/// policy kind, seed, cycle cap and trace decimation. A learned policy needs
/// `agent`.
EpisodeResult RunEpisode(const RunConfig& cfg,
                         std::shared_ptr<const sac::Agent> agent = nullptr,
                         bool keep_traces = false);

}  // namespace harness
}  // namespace srgov
