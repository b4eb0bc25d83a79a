#include "srgov/harness/trainer.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>

#include "srgov/error.h"
#include "srgov/sac/replay_buffer.h"

namespace srgov {
namespace harness {

namespace {

std::string Num(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

}  // namespace

TrainResult Train(const RunConfig& cfg, const TrainCallback& on_episode) {
  const srsm::LoopSetup setup = BuildLoop(cfg);
  sac::SacConfig sac_cfg = cfg.sac;
  sac_cfg.seed = cfg.seed;
  const int state_dim = plant::kStateDim;
  const int action_dim = 1;

  Rng init_rng = Rng::Stream(cfg.seed, streams::kInit);
  Rng noise_master = Rng::Stream(cfg.seed, streams::kPlantNoise);
  Rng policy_rng = Rng::Stream(cfg.seed, streams::kPolicy);
  Rng replay_rng = Rng::Stream(cfg.seed, streams::kReplay);
  Rng update_rng = Rng::Stream(cfg.seed, streams::kUpdate);

  TrainResult result;
  result.agent = std::make_shared<sac::Agent>(
      sac::Agent::Create(state_dim, action_dim, sac_cfg, init_rng));
  sac::Agent& agent = *result.agent;
  sac::ReplayBuffer buffer(sac_cfg.buffer_capacity, state_dim, action_dim);

  EnvOptions env_options;
  env_options.max_cycles = cfg.max_cycles;
  EpisodeOptions validation_options;
  validation_options.max_cycles = cfg.max_cycles;
  validation_options.deterministic = true;
  const std::uint64_t validation_seed =
      Rng::Stream(cfg.seed, streams::kValidation).NextU64();
  std::shared_ptr<sac::Agent> selected;

  std::int64_t steps = 0;
  for (int episode = 0; steps < sac_cfg.total_steps; ++episode) {
    MdpEnv env(setup, cfg.mission, env_options, Rng(noise_master.NextU64()));
    plant::VehicleState s = env.Reset();
    TrainLogRow row;
    row.episode = episode;
    int updates = 0;
    while (!env.Finished() && steps < sac_cfg.total_steps) {
      sac::Vec raw(action_dim);
      if (steps < sac_cfg.warmup) {
        raw(0) = policy_rng.Uniform(-1.0, 1.0);
      } else {
        raw = agent.Act(s, false, policy_rng);
      }
      const double alpha = std::clamp(
          governor::AlphaFromAction(raw(0), cfg.alpha_max), 0.0, cfg.alpha_max);
      const StepResult step = env.Step(alpha, raw(0));
      buffer.Add(sac::Transition{s, raw, step.reward, step.s_next, step.done});
      row.episode_return += step.reward;
      s = step.s_next;
      ++steps;

      if (steps >= sac_cfg.warmup && buffer.size() >= sac_cfg.batch) {
        for (int u = 0; u < sac_cfg.updates_per_step; ++u) {
          const sac::Batch batch = buffer.Sample(sac_cfg.batch, replay_rng);
          const sac::UpdateStats stats = agent.Update(batch, update_rng);
          row.critic_loss += stats.critic_loss;
          row.policy_loss += stats.policy_loss;
          ++updates;
          ++result.updates;
        }
      }
    }
    if (updates > 0) {
      row.critic_loss /= updates;
      row.policy_loss /= updates;
    }
    row.steps = steps;
    row.mission_time = env.mission_time();
    row.failure = env.outcome() == Outcome::kSuccess
                      ? ""
                      : env.Finished() ? std::string(ToString(env.outcome()))
                                       : "truncated";
    row.beta = agent.beta();
    result.log.push_back(row);
    if (on_episode) on_episode(row);

    if (cfg.validate_every > 0 && steps > sac_cfg.warmup &&
        (episode + 1) % cfg.validate_every == 0) {
      auto snapshot = std::make_shared<sac::Agent>(agent);
      const EpisodeResult check = RunEpisode(
          setup, cfg.mission,
          governor::AlphaPolicy::Learned(snapshot, cfg.alpha_max),
          validation_options, validation_seed);
      const bool safe = Summarize({check}, cfg.rho_m).mc_violations == 0;
      if (check.success && safe &&
          !(check.mission_time > result.selected_time)) {
        selected = std::move(snapshot);
        result.selected_steps = steps;
        result.selected_time = check.mission_time;
      }
    }
  }
  result.env_steps = steps;
  if (selected) result.agent = std::move(selected);
  return result;
}

void WriteTrainLog(const std::vector<TrainLogRow>& log,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Throw(ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << "episode,steps,return,mission_time,failure,beta,critic_loss,"
         "policy_loss\n";
  for (const TrainLogRow& row : log) {
    out << row.episode << ',' << row.steps << ',' << Num(row.episode_return)
        << ',' << Num(row.mission_time) << ',' << row.failure << ','
        << Num(row.beta) << ',' << Num(row.critic_loss) << ','
        << Num(row.policy_loss) << '\n';
  }
  if (!out) Throw(ErrorCode::kIoError, "failed writing " + path);
}

EvalSummary Evaluate(const RunConfig& cfg,
                     std::shared_ptr<const sac::Agent> agent, double alpha_max,
                     int episodes, std::uint64_t seed0) {
  if (!agent) Throw(ErrorCode::kModelNotLoaded, "evaluation needs a model");
  const srsm::LoopSetup setup = BuildLoop(cfg);
  const governor::AlphaPolicy learned =
      governor::AlphaPolicy::Learned(std::move(agent), alpha_max);
  const governor::AlphaPolicy baseline =
      governor::AlphaPolicy::Baseline(cfg.alpha_max);
  EpisodeOptions options;
  options.max_cycles = cfg.max_cycles;
  options.deterministic = true;

  EvalSummary summary;
  for (int i = 0; i < episodes; ++i) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
    summary.seeds.push_back(seed);
    summary.rl.push_back(RunEpisode(setup, cfg.mission, learned, options, seed));
    summary.baseline.push_back(
        RunEpisode(setup, cfg.mission, baseline, options, seed));
  }
  return summary;
}

EpisodeStats Summarize(const std::vector<EpisodeResult>& episodes,
                       double rho_m) {
  EpisodeStats stats;
  if (episodes.empty()) return stats;
  int cycles = 0;
  int successes = 0;
  for (const EpisodeResult& ep : episodes) {
    stats.mean_mission_time += ep.mission_time;
    if (ep.success) ++successes;
    for (const CycleRecord& rec : ep.records) {
      stats.mean_mc_peak_est += rec.mc_peak_est_norm_sq;
      stats.mean_mc_entry_est += rec.mc_entry_est_norm_sq;
      stats.mean_mc_peak_true += rec.mc_peak_true_norm_sq;
      stats.mean_alpha += rec.alpha;
      stats.max_mc_peak_est = std::max(stats.max_mc_peak_est, rec.mc_peak_est_norm_sq);
      stats.max_true = std::max(stats.max_true, rec.r_mpn);
      if (rec.mc_peak_est_norm_sq > rho_m) ++stats.mc_violations;
      ++cycles;
    }
  }
  const double n = static_cast<double>(episodes.size());
  stats.mean_mission_time /= n;
  stats.success_rate = successes / n;
  if (cycles > 0) {
    stats.mean_mc_peak_est /= cycles;
    stats.mean_mc_entry_est /= cycles;
    stats.mean_mc_peak_true /= cycles;
    stats.mean_alpha /= cycles;
  }
  return stats;
}

}  // namespace harness
}  // namespace srgov
