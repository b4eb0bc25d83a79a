// srgov: design, run, train and evaluate setpoint governors for the
// rejuvenation-protected quadrotor loop.
//
// Exit status: 0 on success, 1 on a usage or configuration error, 2 on a
// runtime failure (unstable or timed-out mission, I/O problems, numerical
// errors).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "CLI11.hpp"
#include "srgov/error.h"
#include "srgov/governor.h"
#include "srgov/harness/config.h"
#include "srgov/harness/episode.h"
#include "srgov/harness/export.h"
#include "srgov/harness/mdp.h"
#include "srgov/harness/trainer.h"
#include "srgov/numkit.h"
#include "srgov/sac/model_io.h"

namespace {

using srgov::Error;
using srgov::ErrorCode;
namespace harness = srgov::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "master random seed");
}

harness::RunConfig LoadConfig(const CommonFlags& flags) {
  harness::RunConfig cfg;
  if (!flags.config_path.empty()) harness::ApplyConfigFile(cfg, flags.config_path);
  harness::ApplyEnvironment(cfg);
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  cfg.Validate();
  return cfg;
}

void PrintMatrix(const char* name, const srgov::numkit::Mat& m) {
  const Eigen::IOFormat fmt(6, 0, " ", "\n", "  [", "]");
  std::cout << name << " (" << m.rows() << "x" << m.cols() << ")\n"
            << m.format(fmt) << "\n";
}

int CmdDesign(const CommonFlags& flags) {
  const harness::RunConfig cfg = LoadConfig(flags);
  const srgov::srsm::LoopSetup loop = harness::BuildLoop(cfg);
  const auto& m = loop.model;
  PrintMatrix("K", loop.gains.k());
  PrintMatrix("L", loop.gains.l());
  PrintMatrix("P", loop.metric.p().matrix());
  const bool open_loop = srgov::numkit::HurwitzCertificate(m.a);
  const bool k_ok = srgov::numkit::HurwitzCertificate(m.a - m.b * loop.gains.k());
  const bool l_ok = srgov::numkit::HurwitzCertificate(m.a - loop.gains.l() * m.c);
  std::printf("hurwitz A       : %s\n", open_loop ? "pass" : "fail");
  std::printf("hurwitz A - B K : %s\n", k_ok ? "pass" : "fail");
  std::printf("hurwitz A - L C : %s\n", l_ok ? "pass" : "fail");
  std::printf("max position semi-axis of E(1): %.6f m\n",
              srgov::control::MaxPositionSemiAxis(loop.metric.p()));
  std::printf("rho_s = %g  rho_m = %g\n", cfg.rho_s, cfg.rho_m);
  std::printf("conservative alpha = %.6f\n",
              srgov::governor::ConservativeAlpha(loop.metric));
  std::printf("minimum cycle = %.3f s\n", cfg.sr.MinCycleTime());
  return kExitOk;
}

int CmdRun(const CommonFlags& flags, const std::string& policy,
           const std::string& model_path) {
  harness::RunConfig cfg = LoadConfig(flags);
  if (!policy.empty()) harness::SetKey(cfg, "policy", policy);
  std::shared_ptr<const srgov::sac::Agent> agent;
  if (cfg.policy == srgov::governor::PolicyKind::kLearned) {
    if (model_path.empty()) {
      Error e(ErrorCode::kConfigError, "--policy rl needs --model");
      throw e;
    }
    const srgov::sac::LoadedModel loaded = srgov::sac::LoadModel(model_path);
    agent = loaded.agent;
    cfg.alpha_max = loaded.alpha_max;
  }
  const harness::EpisodeResult result = harness::RunEpisode(cfg, agent, true);
  harness::EnsureDirectory(cfg.out_dir);
  if (cfg.trace_every > 0) {
    harness::WriteTraceCsv(result.traces, cfg.out_dir + "/trace.csv");
  }
  harness::WriteCycleCsv({harness::ToString(cfg.policy)}, {&result},
                         cfg.out_dir + "/cycles.csv");
  harness::WriteRunSummary(cfg, result, cfg.out_dir + "/summary.json");
  std::printf("%s: %s after %d cycles, mission_time %.3f s\n",
              harness::ToString(cfg.policy).c_str(),
              std::string(harness::ToString(result.outcome)).c_str(),
              result.cycles, result.mission_time);
  return result.success ? kExitOk : kExitRuntime;
}

int CmdTrain(const CommonFlags& flags, std::optional<std::int64_t> steps,
             const std::string& model_out, const std::string& log_out,
             bool quiet) {
  harness::RunConfig cfg = LoadConfig(flags);
  if (steps) cfg.sac.total_steps = *steps;
  cfg.Validate();
  const harness::TrainResult result = harness::Train(
      cfg, [quiet](const harness::TrainLogRow& row) {
        if (quiet) return;
        std::printf("episode %4d  steps %6lld  return %10.3f  time %8.3f  %s"
                    "  beta %.4g\n",
                    row.episode, static_cast<long long>(row.steps),
                    row.episode_return, row.mission_time,
                    row.failure.empty() ? "success" : row.failure.c_str(),
                    row.beta);
        std::fflush(stdout);
      });
  srgov::sac::SaveModel(*result.agent, cfg.alpha_max, model_out);
  harness::WriteTrainLog(result.log, log_out);
  std::printf("trained %lld env steps, %lld updates; model %s, log %s\n",
              static_cast<long long>(result.env_steps),
              static_cast<long long>(result.updates), model_out.c_str(),
              log_out.c_str());
  if (result.selected_steps >= 0) {
    std::printf("saved snapshot from step %lld (validation mission %.3f s)\n",
                static_cast<long long>(result.selected_steps),
                result.selected_time);
  } else {
    std::printf("saved final agent\n");
  }
  return kExitOk;
}

int CmdEval(const CommonFlags& flags, const std::string& model_path,
            int episodes) {
  const harness::RunConfig cfg = LoadConfig(flags);
  const srgov::sac::LoadedModel loaded = srgov::sac::LoadModel(model_path);
  const harness::EvalSummary summary =
      harness::Evaluate(cfg, loaded.agent, loaded.alpha_max, episodes, cfg.seed);
  harness::EnsureDirectory(cfg.out_dir);
  harness::WriteEvalSummary(cfg, summary, model_path,
                            cfg.out_dir + "/eval_summary.json");
  std::vector<std::string> labels;
  std::vector<const harness::EpisodeResult*> eps;
  for (std::size_t i = 0; i < summary.seeds.size(); ++i) {
    labels.push_back("rl");
    eps.push_back(&summary.rl[i]);
    labels.push_back("baseline");
    eps.push_back(&summary.baseline[i]);
  }
  harness::WriteCycleCsv(labels, eps, cfg.out_dir + "/eval_cycles.csv");

  const harness::EpisodeStats rl = harness::Summarize(summary.rl, cfg.rho_m);
  const harness::EpisodeStats base =
      harness::Summarize(summary.baseline, cfg.rho_m);
  std::printf("%-9s %12s %8s %12s %12s %10s %6s\n", "policy", "time[s]",
              "success", "mc_peak_est", "max_peak", "max_true", "viol");
  for (const auto& [name, s] : {std::pair{"rl", rl}, std::pair{"baseline", base}}) {
    std::printf("%-9s %12.3f %8.2f %12.6f %12.6f %10.6f %6d\n", name,
                s.mean_mission_time, s.success_rate, s.mean_mc_peak_est,
                s.max_mc_peak_est, s.max_true, s.mc_violations);
  }
  const bool ok = rl.success_rate == 1.0 && base.success_rate == 1.0;
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  // Training churns through large short-lived buffers; keep them on the heap.
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
  CLI::App app{"Setpoint governors for a rejuvenation-protected quadrotor"};
  app.require_subcommand(1);

  CommonFlags design_flags;
  CLI::App* design = app.add_subcommand("design", "print gains, metric and certificates");
  AddCommon(design, design_flags);

  CommonFlags run_flags;
  std::string run_policy;
  std::string run_model;
  CLI::App* run = app.add_subcommand("run", "fly one mission and export traces");
  AddCommon(run, run_flags);
  run->add_option("--policy", run_policy, "conservative, baseline or rl")
      ->check(CLI::IsMember({"conservative", "baseline", "rl"}));
  run->add_option("--model", run_model, "model file for --policy rl");
  run->add_option("--out-dir", run_flags.out_dir, "output directory");

  CommonFlags train_flags;
  std::optional<std::int64_t> train_steps;
  std::string train_out = "model.srgov";
  std::string train_log = "train_log.csv";
  bool train_quiet = false;
  CLI::App* train = app.add_subcommand("train", "train the learned governor");
  AddCommon(train, train_flags);
  train->add_option("--steps", train_steps, "environment steps")
      ->check(CLI::PositiveNumber);
  train->add_option("--out", train_out, "model file to write");
  train->add_option("--log", train_log, "training log CSV to write");
  train->add_flag("--quiet", train_quiet, "no per-episode output");

  CommonFlags eval_flags;
  std::string eval_model;
  int eval_episodes = 20;
  CLI::App* eval = app.add_subcommand("eval", "compare a model with the baseline");
  AddCommon(eval, eval_flags);
  eval->add_option("--model", eval_model, "model file")->required();
  eval->add_option("--episodes", eval_episodes, "number of seeded episodes")
      ->check(CLI::PositiveNumber);
  eval->add_option("--out-dir", eval_flags.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*design) return CmdDesign(design_flags);
    if (*run) return CmdRun(run_flags, run_policy, run_model);
    if (*train) {
      return CmdTrain(train_flags, train_steps, train_out, train_log, train_quiet);
    }
    if (*eval) return CmdEval(eval_flags, eval_model, eval_episodes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool config = e.code() == ErrorCode::kConfigError ||
                        e.code() == ErrorCode::kInvalidArgument;
    return config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
