#include "srgov/harness/episode.h"

namespace srgov {
namespace harness {

EpisodeResult RunEpisode(const srsm::LoopSetup& setup,
                         const governor::Mission& mission,
                         const governor::AlphaPolicy& policy,
                         const EpisodeOptions& options, std::uint64_t seed) {
  EnvOptions env_options;
  env_options.max_cycles = options.max_cycles;
  env_options.trace_every = options.trace_every;
  env_options.keep_traces = options.keep_traces;
  MdpEnv env(setup, mission, env_options,
             Rng::Stream(seed, streams::kPlantNoise));
  Rng policy_rng = Rng::Stream(seed, streams::kPolicy);

  EpisodeResult result;
  while (!env.Finished()) {
    const governor::Choice choice =
        governor::ChooseAlpha(policy, env.xhat(), env.progress().x_sp,
                              setup.metric, options.deterministic, policy_rng);
    const StepResult step = env.Step(choice.alpha, choice.raw_action);
    result.total_reward += step.reward;
    result.records.push_back(step.record);
  }
  result.mission_time = env.mission_time();
  result.total_steps = env.total_steps();
  result.cycles = env.cycles();
  result.outcome = env.outcome();
  result.success = env.outcome() == Outcome::kSuccess;
  if (options.keep_traces) result.traces = env.traces();
  return result;
}

EpisodeResult RunEpisode(const RunConfig& cfg,
                         std::shared_ptr<const sac::Agent> agent,
                         bool keep_traces) {
  const srsm::LoopSetup setup = BuildLoop(cfg);
  governor::AlphaPolicy policy = governor::AlphaPolicy::Baseline(cfg.alpha_max);
  switch (cfg.policy) {
    case governor::PolicyKind::kConservative:
      policy = governor::AlphaPolicy::Conservative(cfg.alpha_max);
      break;
    case governor::PolicyKind::kBaseline:
      break;
    case governor::PolicyKind::kLearned:
      policy = governor::AlphaPolicy::Learned(std::move(agent), cfg.alpha_max);
      break;
  }
  EpisodeOptions options;
  options.max_cycles = cfg.max_cycles;
  options.trace_every = cfg.trace_every;
  options.keep_traces = keep_traces;
  return RunEpisode(setup, cfg.mission, policy, options, cfg.seed);
}

}  // namespace harness
}  // namespace srgov
