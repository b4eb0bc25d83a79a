#include "srgov/governor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srgov/error.h"

namespace srgov {
namespace governor {

Setpoint Setpoint::AtPosition(const Eigen::Vector3d& position) {
  if (!position.allFinite()) {
    Throw(ErrorCode::kNonFinite, "setpoint position is not finite");
  }
  Setpoint sp;
  sp.state_.head<3>() = position;
  return sp;
}

void Mission::Validate() const {
  if (waypoints.size() < 2) {
    Throw(ErrorCode::kInvalidArgument, "a mission needs at least two waypoints");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (!waypoints[i].allFinite()) {
      Throw(ErrorCode::kInvalidArgument, "waypoints must be finite");
    }
    if (i > 0 && (waypoints[i] - waypoints[i - 1]).norm() < kDegenerateDistance) {
      Throw(ErrorCode::kInvalidArgument, "consecutive waypoints coincide");
    }
  }
  if (!(goal_tol > 0.0)) {
    Throw(ErrorCode::kInvalidArgument, "goal_tol must be positive");
  }
}

double Mission::Length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += (waypoints[i] - waypoints[i - 1]).norm();
  }
  return total;
}

plant::VehicleState UnitDirection(const Setpoint& x_sp,
                                  const Eigen::Vector3d& w_next) {
  const Eigen::Vector3d delta = w_next - x_sp.position();
  const double dist = delta.norm();
  if (!(dist >= kDegenerateDistance)) {
    std::ostringstream msg;
    msg << "setpoint is " << dist << " m from the next waypoint";
    Throw(ErrorCode::kDegenerateDirection, msg.str());
  }
  plant::VehicleState v = plant::VehicleState::Zero();
  v.head<3>() = delta / dist;
  return v;
}

double ConservativeAlpha(const control::SafetyMetric& metric) {
  return std::sqrt(metric.rho_m()) - std::sqrt(metric.rho_s());
}

double BaselineAlpha(const control::ObserverEstimate& xhat,
                     const Setpoint& x_sp,
                     const control::SafetyMetric& metric) {
  const double est = metric.NormSq(xhat, x_sp.state());
  if (!metric.Recovered(est)) {
    std::ostringstream msg;
    msg << "baseline governor called outside recovery: ||xhat - x_sp||_P^2 = "
        << est << " > rho_s = " << metric.rho_s();
    Throw(ErrorCode::kPreconditionViolated, msg.str());
  }
  return std::sqrt(metric.rho_m()) - std::sqrt(est);
}

double AlphaFromAction(double raw_action, double alpha_max) {
  return alpha_max * (raw_action + 1.0) / 2.0;
}

AlphaPolicy::AlphaPolicy(PolicyKind kind, double alpha_max,
                         std::shared_ptr<const sac::Agent> agent)
    : kind_(kind), alpha_max_(alpha_max), agent_(std::move(agent)) {
  if (!(alpha_max_ > 0.0) || !std::isfinite(alpha_max_)) {
    Throw(ErrorCode::kInvalidArgument, "alpha_max must be positive");
  }
}

AlphaPolicy AlphaPolicy::Conservative(double alpha_max) {
  return AlphaPolicy(PolicyKind::kConservative, alpha_max, nullptr);
}

AlphaPolicy AlphaPolicy::Baseline(double alpha_max) {
  return AlphaPolicy(PolicyKind::kBaseline, alpha_max, nullptr);
}

AlphaPolicy AlphaPolicy::Learned(std::shared_ptr<const sac::Agent> agent,
                                 double alpha_max) {
  return AlphaPolicy(PolicyKind::kLearned, alpha_max, std::move(agent));
}

LearnedChoice LearnedAlpha(const AlphaPolicy& policy,
                           const plant::VehicleState& s, bool deterministic,
                           Rng& rng) {
  if (policy.kind() != PolicyKind::kLearned) {
    Throw(ErrorCode::kInvalidArgument, "policy is not a learned policy");
  }
  if (!policy.agent()) {
    Throw(ErrorCode::kModelNotLoaded, "learned policy has no model");
  }
  const sac::Vec raw = policy.agent()->Act(s, deterministic, rng);
  return LearnedChoice{AlphaFromAction(raw(0), policy.alpha_max()), raw(0)};
}

Choice ChooseAlpha(const AlphaPolicy& policy,
                   const control::ObserverEstimate& xhat, const Setpoint& x_sp,
                   const control::SafetyMetric& metric, bool deterministic,
                   Rng& rng) {
  Choice choice;
  switch (policy.kind()) {
    case PolicyKind::kConservative:
      choice.alpha = ConservativeAlpha(metric);
      break;
    case PolicyKind::kBaseline:
      choice.alpha = BaselineAlpha(xhat, x_sp, metric);
      break;
    case PolicyKind::kLearned: {
      const LearnedChoice learned =
          LearnedAlpha(policy, xhat - x_sp.state(), deterministic, rng);
      choice.alpha = learned.alpha;
      choice.raw_action = learned.raw_action;
      break;
    }
  }
  choice.alpha = std::clamp(choice.alpha, 0.0, policy.alpha_max());
  return choice;
}

Progress StartProgress(const Mission& mission) {
  mission.Validate();
  Progress progress;
  progress.target = 1;
  progress.x_sp = Setpoint::AtPosition(mission.start());
  return progress;
}

Step StepToward(const Setpoint& x_sp, double alpha,
                const plant::VehicleState& v, const Eigen::Vector3d& w_next) {
  if (!(alpha >= 0.0)) {
    Throw(ErrorCode::kInvalidArgument, "alpha must be non-negative");
  }
  const double remaining = (w_next - x_sp.position()).norm();
  if (alpha >= remaining) return Step{Setpoint::AtPosition(w_next), true};
  return Step{Setpoint::AtPosition(x_sp.position() + alpha * v.head<3>()),
              false};
}

Update ApplySetpoint(const Progress& progress, double alpha,
                     const Mission& mission) {
  if (!(alpha >= 0.0)) {
    Throw(ErrorCode::kInvalidArgument, "alpha must be non-negative");
  }
  if (progress.target >= mission.waypoints.size()) {
    Throw(ErrorCode::kInvalidArgument, "progress does not fit the mission");
  }
  Update update{progress, false};
  if (progress.AtGoal(mission)) return update;
  const Eigen::Vector3d& w_next = mission.waypoints[progress.target];
  const plant::VehicleState v = UnitDirection(progress.x_sp, w_next);
  const Step step = StepToward(progress.x_sp, alpha, v, w_next);
  update.next.x_sp = step.x_sp;
  update.reached_waypoint = step.reached_waypoint;
  if (step.reached_waypoint && progress.target + 1 < mission.waypoints.size()) {
    ++update.next.target;
  }
  return update;
}

}  // namespace governor
}  // namespace srgov
