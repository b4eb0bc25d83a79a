#pragma once

// Software-rejuvenation mode machine. One cycle runs, at a fixed step dt:
//
//   CP  snapshot (xhat, x_sp)
//   MC  t_mc seconds of closed loop with the observer running
//   RB  t_rb seconds with u frozen and the observer halted
//       then xhat and x_sp are restored from the snapshot
//   SC  closed loop with observer until t_est has elapsed and the estimate
//       is inside E(rho_s, x_sp)
//
// after which the governor may move the setpoint and the next cycle starts.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "srgov/control.h"
#include "srgov/plant.h"
#include "srgov/random.h"
#include "srgov/setpoint.h"

namespace srgov {
namespace srsm {

using control::ObserverEstimate;
using governor::Setpoint;
using plant::ControlInput;
using plant::VehicleState;

struct SRConfig {
  double t_mc = 0.200;      // s
  double t_rb = 0.010;      // s
  double t_est = 1.7;       // s
  double dt = 0.001;        // s
  double v_unstable = 10.0; // bound on ||x - x_sp||_P^2
  double t_sc_max = 30.0;   // s

  /// Throws InvalidArgument unless every time is positive and dt divides
  /// t_mc, t_rb and t_est within 1e-9.
  void Validate() const;

  double t_uc() const { return t_mc + t_rb; }
  double MinCycleTime() const { return t_mc + t_rb + t_est; }

  std::int64_t mc_steps() const;
  std::int64_t rb_steps() const;
  std::int64_t est_steps() const;
  std::int64_t sc_max_steps() const;
  std::int64_t MinCycleSteps() const { return mc_steps() + rb_steps() + est_steps(); }
};

enum class Mode : std::uint8_t { kSC, kCP, kMC, kRB };

std::string_view ToString(Mode mode);

/// Legal transitions of the cycle CP -> MC -> RB -> SC -> (update) -> CP.
/// MC, RB and SC may repeat while their dwell time runs.
bool ModeLegal(Mode from, Mode to);

struct Checkpoint {
  const ObserverEstimate xhat;
  const Setpoint x_sp;
};

enum class CycleStatus : std::uint8_t { kOk, kUnstable, kScTimeout };

std::string_view ToString(CycleStatus status);

/// One recorded sample. Row k holds the state at the start of step k and
/// the input applied over that step.
struct TraceRow {
  std::int64_t step = 0;  // global step index; t = step * dt
  double t = 0.0;
  Mode mode = Mode::kSC;
  VehicleState x = VehicleState::Zero();
  ObserverEstimate xhat = ObserverEstimate::Zero();
  Eigen::Vector3d sp = Eigen::Vector3d::Zero();
  double true_norm_sq = 0.0;
  double est_norm_sq = 0.0;
  ControlInput u = ControlInput::Zero();
};

struct CycleTrace {
  std::vector<TraceRow> rows;
  double r_mpn = 0.0;                  // max true_norm_sq over the cycle
  std::int64_t duration_steps = 0;
  double duration = 0.0;               // s
  CycleStatus status = CycleStatus::kOk;
  // Per-mode summaries, computed on every sample whether recorded or not.
  double mc_entry_est_norm_sq = 0.0;
  double mc_peak_est_norm_sq = 0.0;
  double mc_peak_true_norm_sq = 0.0;
  double sc_peak_true_norm_sq = 0.0;
  double final_est_norm_sq = 0.0;
};

/// Immutable description of the protected loop.
struct LoopSetup {
  plant::QuadParams params;
  plant::LinearModel model;
  control::GainSet gains;
  control::SafetyMetric metric;
  SRConfig sr;
  plant::Measurement noise_std = plant::Measurement::Zero();
};

struct CycleOptions {
  /// Record every n-th sample; 0 records nothing.
  int record_every = 1;
  /// Global step index of the cycle's first sample.
  std::int64_t start_step = 0;
};

struct CycleResult {
  VehicleState x;
  ObserverEstimate xhat;
  CycleTrace trace;
};

/// Runs one complete SR cycle starting at CP. The caller must have just
/// performed the setpoint update. Integration failures and
/// ||x - x_sp||_P^2 > v_unstable end the cycle as kUnstable with r_mpn =
/// v_unstable; an SC phase longer than t_sc_max ends it as kScTimeout.
CycleResult RunCycle(const LoopSetup& setup, const VehicleState& x,
                     const ObserverEstimate& xhat, const Setpoint& x_sp,
                     Rng& rng, const CycleOptions& options = {});

}  // namespace srsm
}  // namespace srgov
