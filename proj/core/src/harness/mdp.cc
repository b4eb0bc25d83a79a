#include "srgov/harness/mdp.h"

#include <utility>

#include "srgov/error.h"

namespace srgov {
namespace harness {

srsm::LoopSetup BuildLoop(const RunConfig& cfg) {
  cfg.Validate();
  const plant::LinearModel model = plant::HoverLinearization(cfg.quad);
  const control::GainSet gains =
      control::DesignGains(model, control::QuadrotorWeights(cfg.weights));
  const control::SafetyMetric metric = control::BuildSafetyMetric(
      model.a - model.b * gains.k(), cfg.rho_s, cfg.rho_m, cfg.d_safe);
  return srsm::LoopSetup{cfg.quad, model, gains, metric, cfg.sr,
                         cfg.noise.AsVector()};
}

double Reward(const srsm::CycleTrace& trace, const plant::VehicleState& x_end,
              const governor::Setpoint& x_goal,
              const control::SafetyMetric& metric) {
  return -trace.r_mpn - metric.NormSq(x_end, x_goal.state());
}

std::string_view ToString(Outcome outcome) {
  switch (outcome) {
    case Outcome::kRunning: return "running";
    case Outcome::kSuccess: return "success";
    case Outcome::kUnstable: return "unstable";
    case Outcome::kScTimeout: return "sc_timeout";
    case Outcome::kCycleCap: return "cycle_cap";
  }
  return "?";
}

MdpEnv::MdpEnv(const srsm::LoopSetup& setup, governor::Mission mission,
               EnvOptions options, Rng noise)
    : setup_(setup),
      mission_(std::move(mission)),
      options_(options),
      noise_(std::move(noise)) {
  mission_.Validate();
  if (options_.max_cycles <= 0) {
    Throw(ErrorCode::kInvalidArgument, "max_cycles must be positive");
  }
  goal_ = governor::Setpoint::AtPosition(mission_.goal());
  Reset();
}

plant::VehicleState MdpEnv::Reset() {
  progress_ = governor::StartProgress(mission_);
  x_ = progress_.x_sp.state();
  xhat_ = x_;
  outcome_ = Outcome::kRunning;
  cycles_ = 0;
  total_steps_ = 0;
  traces_.clear();
  return State();
}

double MdpEnv::mission_time() const {
  return static_cast<double>(total_steps_) * setup_.sr.dt;
}

StepResult MdpEnv::Step(double alpha, double raw_action) {
  if (Finished()) {
    Throw(ErrorCode::kPreconditionViolated, "episode has already finished");
  }
  StepResult result;
  CycleRecord& rec = result.record;
  rec.cycle = cycles_;
  rec.alpha = alpha;
  rec.raw_action = raw_action;
  rec.decision_est_norm_sq = setup_.metric.NormSq(xhat_, progress_.x_sp.state());

  progress_ = governor::ApplySetpoint(progress_, alpha, mission_).next;

  srsm::CycleOptions cycle_options;
  cycle_options.record_every = options_.trace_every;
  cycle_options.start_step = total_steps_;
  srsm::CycleResult cycle =
      srsm::RunCycle(setup_, x_, xhat_, progress_.x_sp, noise_, cycle_options);
  x_ = cycle.x;
  xhat_ = cycle.xhat;
  ++cycles_;
  total_steps_ += cycle.trace.duration_steps;

  const srsm::CycleTrace& trace = cycle.trace;
  rec.r_mpn = trace.r_mpn;
  rec.mc_entry_est_norm_sq = trace.mc_entry_est_norm_sq;
  rec.mc_peak_est_norm_sq = trace.mc_peak_est_norm_sq;
  rec.mc_peak_true_norm_sq = trace.mc_peak_true_norm_sq;
  rec.sc_peak_true_norm_sq = trace.sc_peak_true_norm_sq;
  rec.duration_steps = trace.duration_steps;
  rec.duration = trace.duration;
  rec.status = trace.status;
  rec.reward = Reward(trace, x_, goal_, setup_.metric);
  result.reward = rec.reward;
  result.s_next = State();

  if (trace.status == srsm::CycleStatus::kUnstable) {
    outcome_ = Outcome::kUnstable;
    result.done = true;
  } else if (trace.status == srsm::CycleStatus::kScTimeout) {
    outcome_ = Outcome::kScTimeout;
  } else if (progress_.AtGoal(mission_) &&
             (x_.head<3>() - mission_.goal()).norm() <= mission_.goal_tol) {
    outcome_ = Outcome::kSuccess;
    result.done = true;
  } else if (cycles_ >= options_.max_cycles) {
    outcome_ = Outcome::kCycleCap;
  }
  if (options_.keep_traces) traces_.push_back(std::move(cycle.trace));
  return result;
}

}  // namespace harness
}  // namespace srgov
