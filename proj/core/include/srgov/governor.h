#pragma once

// Setpoint update rules. At a recovery instant the governor picks a step
// size alpha and moves x_sp by alpha along the unit direction toward the
// active waypoint.

#include <memory>
#include <utility>

#include "srgov/control.h"
#include "srgov/random.h"
#include "srgov/sac/agent.h"
#include "srgov/setpoint.h"

namespace srgov {
namespace governor {

inline constexpr double kDegenerateDistance = 1e-12;
inline constexpr double kDefaultAlphaMax = 0.1;

/// 12-dim direction whose position part is the unit vector from x_sp to
/// `w_next` and whose other entries are zero. Throws DegenerateDirection
/// when the two positions are closer than 1e-12.
plant::VehicleState UnitDirection(const Setpoint& x_sp,
                                  const Eigen::Vector3d& w_next);

/// sqrt(rho_m) - sqrt(rho_s).
double ConservativeAlpha(const control::SafetyMetric& metric);

/// sqrt(rho_m) - ||xhat - x_sp||_P. Throws PreconditionViolated when the
/// estimate is outside E(rho_s, x_sp).
double BaselineAlpha(const control::ObserverEstimate& xhat,
                     const Setpoint& x_sp, const control::SafetyMetric& metric);

/// Affine map of a raw action in [-1, 1] onto [0, alpha_max].
double AlphaFromAction(double raw_action, double alpha_max);

enum class PolicyKind { kConservative, kBaseline, kLearned };

class AlphaPolicy {
 public:
  static AlphaPolicy Conservative(double alpha_max = kDefaultAlphaMax);
  static AlphaPolicy Baseline(double alpha_max = kDefaultAlphaMax);
  /// `agent` may be null; LearnedAlpha then throws ModelNotLoaded.
  static AlphaPolicy Learned(std::shared_ptr<const sac::Agent> agent,
                             double alpha_max = kDefaultAlphaMax);

  PolicyKind kind() const { return kind_; }
  double alpha_max() const { return alpha_max_; }
  const std::shared_ptr<const sac::Agent>& agent() const { return agent_; }

 private:
  AlphaPolicy(PolicyKind kind, double alpha_max,
              std::shared_ptr<const sac::Agent> agent);

  PolicyKind kind_;
  double alpha_max_;
  std::shared_ptr<const sac::Agent> agent_;
};

struct LearnedChoice {
  double alpha = 0.0;
  double raw_action = 0.0;
};

/// Queries the policy on s = xhat - x_sp. Throws ModelNotLoaded for a
/// Learned policy without an agent and InvalidArgument for another kind.
LearnedChoice LearnedAlpha(const AlphaPolicy& policy,
                           const plant::VehicleState& s, bool deterministic,
                           Rng& rng);

struct Choice {
  double alpha = 0.0;
  double raw_action = 0.0;  // meaningful for learned policies only
};

/// Dispatches on the policy kind and clamps the result to [0, alpha_max].
Choice ChooseAlpha(const AlphaPolicy& policy,
                   const control::ObserverEstimate& xhat, const Setpoint& x_sp,
                   const control::SafetyMetric& metric, bool deterministic,
                   Rng& rng);

/// Position along a mission: the active segment and the setpoint on it.
struct Progress {
  std::size_t target = 1;  // index of the waypoint being approached
  Setpoint x_sp;

  bool AtGoal(const Mission& mission) const {
    return target + 1 >= mission.waypoints.size() &&
           x_sp.position() == mission.goal();
  }
};

Progress StartProgress(const Mission& mission);

struct Step {
  Setpoint x_sp;
  bool reached_waypoint = false;
};

/// x_sp + alpha v, or exactly `w_next` when that step would reach or pass
/// it. `v` must be the UnitDirection toward `w_next`.
Step StepToward(const Setpoint& x_sp, double alpha,
                const plant::VehicleState& v, const Eigen::Vector3d& w_next);

struct Update {
  Progress next;
  bool reached_waypoint = false;
};

/// x_sp + alpha v toward the active waypoint, snapped onto the waypoint when
/// the step would pass it. Throws InvalidArgument for alpha < 0. Once the
/// final waypoint is reached the setpoint stays there.
Update ApplySetpoint(const Progress& progress, double alpha,
                     const Mission& mission);

}  // namespace governor
}  // namespace srgov
