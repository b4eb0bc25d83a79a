#pragma once

// Rigid-body quadrotor with torque-level inputs, its hover linearization and
// the noisy position/attitude sensor.
//
// State ordering (VehicleState), all SI:
//   [0..2]  position px, py, pz          (m)
//   [3..5]  velocity vx, vy, vz          (m/s)
//   [6..8]  Euler angles roll, pitch, yaw (rad, ZYX convention)
//   [9..11] body rates wx, wy, wz        (rad/s)
// Input ordering (ControlInput): thrust deviation from hover dT (N), then
// body torques tx, ty, tz (N m).
// Measurement ordering: position (m) then Euler angles (rad).

#include <Eigen/Dense>

#include "srgov/numkit.h"
#include "srgov/random.h"

namespace srgov {
namespace plant {

inline constexpr int kStateDim = 12;
inline constexpr int kInputDim = 4;
inline constexpr int kMeasDim = 6;

using VehicleState = Eigen::Matrix<double, kStateDim, 1>;
using ControlInput = Eigen::Matrix<double, kInputDim, 1>;
using Measurement = Eigen::Matrix<double, kMeasDim, 1>;

/// Indices of the measured state components, in measurement order.
inline constexpr int kMeasuredIndices[kMeasDim] = {0, 1, 2, 6, 7, 8};

/// |pitch| at or beyond pi/2 - kGimbalMargin is rejected.
inline constexpr double kGimbalMargin = 1e-6;

struct QuadParams {
  double mass = 1.0;
  double gravity = 9.81;
  Eigen::Vector3d inertia_diag{0.01, 0.01, 0.02};

  /// Throws InvalidArgument unless every field is strictly positive.
  void Validate() const;
};

struct LinearModel {
  numkit::Mat a;  // 12x12
  numkit::Mat b;  // 12x4
  numkit::Mat c;  // 6x12
};

/// Small-angle hover linearization of NonlinearDerivative.
LinearModel HoverLinearization(const QuadParams& params);

/// dx/dt of the rigid-body model. Throws NonFinite on NaN/Inf in x or u and
/// GimbalLock when |pitch| >= pi/2 - kGimbalMargin.
VehicleState NonlinearDerivative(const QuadParams& params,
                                 const VehicleState& x,
                                 const ControlInput& u);

/// Per-channel measurement noise standard deviations.
struct NoiseStd {
  double position = 0.005;  // m
  double angle = 0.002;     // rad

  Measurement AsVector() const;
};

/// y = C x + w with w ~ N(0, diag(noise_std^2)) drawn from rng. Draws exactly
/// kMeasDim normals from rng regardless of the noise level.
Measurement Measure(const numkit::Mat& c, const VehicleState& x,
                    const Measurement& noise_std, Rng& rng);

}  // namespace plant
}  // namespace srgov
