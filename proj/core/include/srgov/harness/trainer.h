#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "srgov/harness/config.h"
#include "srgov/harness/episode.h"
#include "srgov/sac/agent.h"

namespace srgov {
namespace harness {

/// One row of the training log.
struct TrainLogRow {
  int episode = 0;
  std::int64_t steps = 0;  // env steps at the end of the episode
  double episode_return = 0.0;
  double mission_time = 0.0;
  std::string failure;  // empty on success
  double beta = 0.0;
  double critic_loss = 0.0;  // mean over the episode's updates
  double policy_loss = 0.0;
};

struct TrainResult {
  std::shared_ptr<sac::Agent> agent;
  std::vector<TrainLogRow> log;
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
  // Env steps and validation mission time of the returned snapshot; -1 and
  // NaN when the final agent is returned.
  std::int64_t selected_steps = -1;
  double selected_time = std::numeric_limits<double>::quiet_NaN();
};

/// Called after every episode; used for progress output.
using TrainCallback = std::function<void(const TrainLogRow&)>;

/// SAC over missions of `cfg` with stochastic learned actions. The first
/// `warmup` env steps take uniformly random actions; afterwards every env
/// step is followed by `updates_per_step` updates once the buffer holds a
/// full batch. Stops after `total_steps` env steps.
///
/// With cfg.validate_every > 0 the deterministic policy flies a validation
/// mission (one fixed noise seed) after every validate_every-th episode.
/// The returned agent is the snapshot with the shortest successful
/// validation mission without MC violations, the later one on ties. If no
/// validation qualifies, the final agent is returned.
TrainResult Train(const RunConfig& cfg, const TrainCallback& on_episode = {});

/// Training log CSV with header
/// episode,steps,return,mission_time,failure,beta,critic_loss,policy_loss
void WriteTrainLog(const std::vector<TrainLogRow>& log, const std::string& path);

struct EvalSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<EpisodeResult> rl;
  std::vector<EpisodeResult> baseline;
};

/// Deterministic learned policy and the baseline governor on the same seeds
/// seed0, seed0 + 1, ...; traces are not kept.
EvalSummary Evaluate(const RunConfig& cfg,
                     std::shared_ptr<const sac::Agent> agent, double alpha_max,
                     int episodes, std::uint64_t seed0);

/// Aggregates over a set of episodes.
struct EpisodeStats {
  double mean_mission_time = 0.0;
  double success_rate = 0.0;
  double mean_mc_peak_est = 0.0;   // mean over all cycles
  double mean_mc_entry_est = 0.0;
  double mean_mc_peak_true = 0.0;
  double max_mc_peak_est = 0.0;
  double max_true = 0.0;           // max r_mpn
  double mean_alpha = 0.0;
  int mc_violations = 0;           // cycles with an MC sample above rho_m
};

EpisodeStats Summarize(const std::vector<EpisodeResult>& episodes, double rho_m);

}  // namespace harness
}  // namespace srgov
