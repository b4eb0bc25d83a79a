#pragma once

// The decision process seen by a governor: one step is one SR cycle, taken
// at a recovery instant. The state is s = xhat - x_sp before the setpoint
// update.

#include <cstdint>
#include <string_view>
#include <vector>

#include "srgov/governor.h"
#include "srgov/harness/config.h"
#include "srgov/srsm.h"

namespace srgov {
namespace harness {

/// Gains, metric and plant for a configuration.
srsm::LoopSetup BuildLoop(const RunConfig& cfg);

/// -r_mpn - ||x_end - x_goal||_P^2.
double Reward(const srsm::CycleTrace& trace, const plant::VehicleState& x_end,
              const governor::Setpoint& x_goal,
              const control::SafetyMetric& metric);

enum class Outcome { kRunning, kSuccess, kUnstable, kScTimeout, kCycleCap };

std::string_view ToString(Outcome outcome);

struct CycleRecord {
  int cycle = 0;
  double alpha = 0.0;
  double raw_action = 0.0;
  double decision_est_norm_sq = 0.0;  // at the recovery instant
  double r_mpn = 0.0;
  double mc_entry_est_norm_sq = 0.0;
  double mc_peak_est_norm_sq = 0.0;
  double mc_peak_true_norm_sq = 0.0;
  double sc_peak_true_norm_sq = 0.0;
  double reward = 0.0;
  std::int64_t duration_steps = 0;
  double duration = 0.0;
  srsm::CycleStatus status = srsm::CycleStatus::kOk;
};

struct StepResult {
  plant::VehicleState s_next = plant::VehicleState::Zero();
  double reward = 0.0;
  bool done = false;  // Unstable or success; not set for truncation
  CycleRecord record;
};

struct EnvOptions {
  int max_cycles = 200;
  int trace_every = 0;  // forwarded to RunCycle; 0 records nothing
  bool keep_traces = false;
};

class MdpEnv {
 public:
  /// `setup` must outlive the environment. `noise` drives the measurement
  /// noise of every cycle.
  MdpEnv(const srsm::LoopSetup& setup, governor::Mission mission,
         EnvOptions options, Rng noise);

  /// Places the vehicle in hover at the first waypoint with xhat = x and
  /// x_sp there, and returns the first state.
  plant::VehicleState Reset();

  plant::VehicleState State() const { return xhat_ - progress_.x_sp.state(); }

  /// Moves the setpoint by alpha, runs one cycle and scores it. Throws
  /// PreconditionViolated after the episode has finished.
  StepResult Step(double alpha, double raw_action = 0.0);

  bool Finished() const { return outcome_ != Outcome::kRunning; }
  Outcome outcome() const { return outcome_; }
  int cycles() const { return cycles_; }
  std::int64_t total_steps() const { return total_steps_; }
  double mission_time() const;

  const governor::Progress& progress() const { return progress_; }
  const plant::VehicleState& x() const { return x_; }
  const control::ObserverEstimate& xhat() const { return xhat_; }
  const governor::Mission& mission() const { return mission_; }
  const srsm::LoopSetup& setup() const { return setup_; }
  const std::vector<srsm::CycleTrace>& traces() const { return traces_; }

 private:
  const srsm::LoopSetup& setup_;
  governor::Mission mission_;
  governor::Setpoint goal_;
  EnvOptions options_;
  Rng noise_;
  plant::VehicleState x_ = plant::VehicleState::Zero();
  control::ObserverEstimate xhat_ = control::ObserverEstimate::Zero();
  governor::Progress progress_;
  Outcome outcome_ = Outcome::kRunning;
  int cycles_ = 0;
  std::int64_t total_steps_ = 0;
  std::vector<srsm::CycleTrace> traces_;
};

}  // namespace harness
}  // namespace srgov
