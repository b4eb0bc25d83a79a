#include "srgov/srsm.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace srgov {
namespace srsm {

namespace {

std::int64_t StepsFor(double duration, double dt, const char* name) {
  const double ratio = duration / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << name << "=" << duration << " is not a multiple of dt=" << dt;
    Throw(ErrorCode::kInvalidArgument, msg.str());
  }
  return static_cast<std::int64_t>(rounded);
}

using StateMatrix = Eigen::Matrix<double, plant::kStateDim, plant::kStateDim>;
using GainMatrix = Eigen::Matrix<double, plant::kInputDim, plant::kStateDim>;

}  // namespace

void SRConfig::Validate() const {
  for (double v : {t_mc, t_rb, t_est, dt, v_unstable, t_sc_max}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      Throw(ErrorCode::kInvalidArgument,
            "SR times and the instability bound must be positive");
    }
  }
  StepsFor(t_mc, dt, "t_mc");
  StepsFor(t_rb, dt, "t_rb");
  StepsFor(t_est, dt, "t_est");
}

std::int64_t SRConfig::mc_steps() const { return StepsFor(t_mc, dt, "t_mc"); }
std::int64_t SRConfig::rb_steps() const { return StepsFor(t_rb, dt, "t_rb"); }
std::int64_t SRConfig::est_steps() const {
  return StepsFor(t_est, dt, "t_est");
}
std::int64_t SRConfig::sc_max_steps() const {
  return static_cast<std::int64_t>(std::floor(t_sc_max / dt + 1e-9));
}

std::string_view ToString(Mode mode) {
  switch (mode) {
    case Mode::kSC: return "SC";
    case Mode::kCP: return "CP";
    case Mode::kMC: return "MC";
    case Mode::kRB: return "RB";
  }
  return "?";
}

std::string_view ToString(CycleStatus status) {
  switch (status) {
    case CycleStatus::kOk: return "Ok";
    case CycleStatus::kUnstable: return "Unstable";
    case CycleStatus::kScTimeout: return "ScTimeout";
  }
  return "?";
}

bool ModeLegal(Mode from, Mode to) {
  switch (from) {
    case Mode::kCP: return to == Mode::kMC;
    case Mode::kMC: return to == Mode::kMC || to == Mode::kRB;
    case Mode::kRB: return to == Mode::kRB || to == Mode::kSC;
    case Mode::kSC: return to == Mode::kSC || to == Mode::kCP;
  }
  return false;
}

namespace {

// Mutable state of one cycle. Kept in a class so the per-sample bookkeeping
// is shared by all four modes.
class CycleRunner {
 public:
  CycleRunner(const LoopSetup& setup, const VehicleState& x,
              const ObserverEstimate& xhat, const Setpoint& x_sp, Rng& rng,
              const CycleOptions& options)
      : setup_(setup),
        observer_(setup.model, setup.gains.l()),
        k_(setup.gains.k()),
        p_(setup.metric.p().matrix()),
        rng_(rng),
        options_(options),
        x_(x),
        xhat_(xhat),
        sp_(x_sp.state()) {}

  CycleResult Run(const Checkpoint& checkpoint) {
    const SRConfig& sr = setup_.sr;
    try {
      // CP: the snapshot instant; the step leaving it is driven as MC.
      ControlInput u = Law();
      if (!Sample(Mode::kCP, u)) return Finish();
      trace_.mc_entry_est_norm_sq = est_;
      StepClosedLoop(u);
      Enter(Mode::kMC);
      for (std::int64_t i = 1; i < sr.mc_steps(); ++i) {
        u = Law();
        if (!Sample(Mode::kMC, u)) return Finish();
        StepClosedLoop(u);
      }

      // RB: input frozen at its last MC value, software down.
      Enter(Mode::kRB);
      for (std::int64_t i = 0; i < sr.rb_steps(); ++i) {
        if (!Sample(Mode::kRB, u)) return Finish();
        x_ = StepPlant(x_, u);
        ++steps_;
      }

      // Rollback to the checkpoint image.
      xhat_ = checkpoint.xhat;
      sp_ = checkpoint.x_sp.state();
      Enter(Mode::kSC);
      for (std::int64_t elapsed = 0;; ++elapsed) {
        const double est = setup_.metric.NormSq(xhat_, sp_);
        if (elapsed >= sr.est_steps() && setup_.metric.Recovered(est)) break;
        if (elapsed >= sr.sc_max_steps()) {
          trace_.status = CycleStatus::kScTimeout;
          return Finish();
        }
        u = Law();
        if (!Sample(Mode::kSC, u)) return Finish();
        StepClosedLoop(u);
      }
      if (!(NormSq(x_) <= sr.v_unstable)) MarkUnstable();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonFinite &&
          e.code() != ErrorCode::kGimbalLock) {
        throw;
      }
      MarkUnstable();
    }
    return Finish();
  }

 private:
  ControlInput Law() const { return -(k_ * (xhat_ - sp_)); }

  double NormSq(const VehicleState& v) const {
    const VehicleState d = v - sp_;
    return d.dot(p_ * d);
  }

  void Enter(Mode next) {
    if (!ModeLegal(mode_, next)) {
      Throw(ErrorCode::kPreconditionViolated,
            std::string("illegal SR transition ") +
                std::string(ToString(mode_)) + " -> " +
                std::string(ToString(next)));
    }
    mode_ = next;
  }

  // Records the current sample and returns false when the cycle must stop.
  bool Sample(Mode mode, const ControlInput& u) {
    const double true_norm = NormSq(x_);
    est_ = setup_.metric.NormSq(xhat_, sp_);
    if (mode == Mode::kCP || mode == Mode::kMC) {
      trace_.mc_peak_est_norm_sq = std::max(trace_.mc_peak_est_norm_sq, est_);
      trace_.mc_peak_true_norm_sq =
          std::max(trace_.mc_peak_true_norm_sq, true_norm);
    } else if (mode == Mode::kSC) {
      trace_.sc_peak_true_norm_sq =
          std::max(trace_.sc_peak_true_norm_sq, true_norm);
    }
    if (options_.record_every > 0 && steps_ % options_.record_every == 0) {
      TraceRow row;
      row.step = options_.start_step + steps_;
      row.t = static_cast<double>(row.step) * setup_.sr.dt;
      row.mode = mode;
      row.x = x_;
      row.xhat = xhat_;
      row.sp = sp_.head<3>();
      row.true_norm_sq = true_norm;
      row.est_norm_sq = est_;
      row.u = u;
      trace_.rows.push_back(row);
    }
    if (!(true_norm <= setup_.sr.v_unstable)) {
      MarkUnstable();
      return false;
    }
    trace_.r_mpn = std::max(trace_.r_mpn, true_norm);
    return true;
  }

  VehicleState StepPlant(const VehicleState& x, const ControlInput& u) const {
    auto f = [this](const VehicleState& s, const ControlInput& in) {
      return plant::NonlinearDerivative(setup_.params, s, in);
    };
    return numkit::Rk4Step(f, x, u, setup_.sr.dt);
  }

  void StepClosedLoop(const ControlInput& u) {
    const plant::Measurement noise =
        plant::Measure(setup_.model.c, VehicleState::Zero(), setup_.noise_std,
                       rng_);
    auto f = [this](const VehicleState& s, const ControlInput& in) {
      return plant::NonlinearDerivative(setup_.params, s, in);
    };
    std::tie(x_, xhat_) =
        observer_.StepCoupled(f, x_, xhat_, u, noise, setup_.sr.dt);
    ++steps_;
  }

  void MarkUnstable() {
    trace_.status = CycleStatus::kUnstable;
    trace_.r_mpn = setup_.sr.v_unstable;
  }

  CycleResult Finish() {
    trace_.duration_steps = steps_;
    trace_.duration = static_cast<double>(trace_.duration_steps) * setup_.sr.dt;
    trace_.final_est_norm_sq = setup_.metric.NormSq(xhat_, sp_);
    return CycleResult{x_, xhat_, std::move(trace_)};
  }

  const LoopSetup& setup_;
  const control::Observer observer_;
  const GainMatrix k_;
  const StateMatrix p_;
  Rng& rng_;
  const CycleOptions options_;

  VehicleState x_;
  ObserverEstimate xhat_;
  VehicleState sp_;
  Mode mode_ = Mode::kCP;
  std::int64_t steps_ = 0;
  double est_ = 0.0;
  CycleTrace trace_;
};

}  // namespace

CycleResult RunCycle(const LoopSetup& setup, const VehicleState& x,
                     const ObserverEstimate& xhat, const Setpoint& x_sp,
                     Rng& rng, const CycleOptions& options) {
  const Checkpoint checkpoint{xhat, x_sp};
  CycleRunner runner(setup, x, xhat, x_sp, rng, options);
  return runner.Run(checkpoint);
}

}  // namespace srsm
}  // namespace srgov
