#pragma once

#include <vector>

#include <Eigen/Dense>

#include "srgov/plant.h"

namespace srgov {
namespace governor {

/// Hover equilibrium target: a position with every other state component
/// exactly zero.
class Setpoint {
 public:
  Setpoint() : state_(plant::VehicleState::Zero()) {}
  static Setpoint AtPosition(const Eigen::Vector3d& position);

  Eigen::Vector3d position() const { return state_.head<3>(); }
  const plant::VehicleState& state() const { return state_; }

  friend bool operator==(const Setpoint& a, const Setpoint& b) {
    return a.state_ == b.state_;
  }

 private:
  plant::VehicleState state_;
};

struct Mission {
  std::vector<Eigen::Vector3d> waypoints{Eigen::Vector3d(1.0, 1.0, 1.0),
                                         Eigen::Vector3d(5.0, 5.0, 5.0)};
  double goal_tol = 0.05;  // m

  /// Throws InvalidArgument unless there are >= 2 waypoints, consecutive
  /// waypoints differ and goal_tol > 0.
  void Validate() const;

  const Eigen::Vector3d& start() const { return waypoints.front(); }
  const Eigen::Vector3d& goal() const { return waypoints.back(); }
  /// Euclidean length of the polyline.
  double Length() const;
};

}  // namespace governor
}  // namespace srgov
