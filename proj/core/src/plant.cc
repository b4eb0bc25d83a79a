#include "srgov/plant.h"

#include <cmath>
#include <numbers>

namespace srgov {
namespace plant {

void QuadParams::Validate() const {
  if (!(mass > 0.0) || !(gravity > 0.0) || !(inertia_diag.array() > 0.0).all() ||
      !std::isfinite(mass) || !std::isfinite(gravity) ||
      !inertia_diag.allFinite()) {
    Throw(ErrorCode::kInvalidArgument,
          "quadrotor mass, gravity and inertia must be finite and positive");
  }
}

LinearModel HoverLinearization(const QuadParams& params) {
  params.Validate();
  LinearModel model{numkit::Mat::Zero(kStateDim, kStateDim),
                    numkit::Mat::Zero(kStateDim, kInputDim),
                    numkit::Mat::Zero(kMeasDim, kStateDim)};
  auto& a = model.a;
  auto& b = model.b;
  for (int i = 0; i < 3; ++i) {
    a(i, 3 + i) = 1.0;      // position rate = velocity
    a(6 + i, 9 + i) = 1.0;  // Euler rates = body rates at hover
  }
  a(3, 7) = params.gravity;   // vx_dot = g * pitch
  a(4, 6) = -params.gravity;  // vy_dot = -g * roll
  b(5, 0) = 1.0 / params.mass;
  for (int i = 0; i < 3; ++i) b(9 + i, 1 + i) = 1.0 / params.inertia_diag(i);
  for (int r = 0; r < kMeasDim; ++r) model.c(r, kMeasuredIndices[r]) = 1.0;
  return model;
}

VehicleState NonlinearDerivative(const QuadParams& params,
                                 const VehicleState& x,
                                 const ControlInput& u) {
  if (!x.allFinite() || !u.allFinite()) {
    Throw(ErrorCode::kNonFinite, "non-finite state or input");
  }
  const double roll = x(6);
  const double pitch = x(7);
  const double yaw = x(8);
  if (std::abs(pitch) >= std::numbers::pi / 2.0 - kGimbalMargin) {
    Throw(ErrorCode::kGimbalLock, "pitch reached the Euler singularity");
  }
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double m = params.mass;
  const double thrust = m * params.gravity + u(0);

  VehicleState dx;
  dx.segment<3>(0) = x.segment<3>(3);

  // Third column of R = Rz(yaw) Ry(pitch) Rx(roll).
  const Eigen::Vector3d body_z(cy * sp * cr + sy * sr, sy * sp * cr - cy * sr,
                               cp * cr);
  dx.segment<3>(3) = (thrust / m) * body_z;
  dx(5) -= params.gravity;

  const Eigen::Vector3d w = x.segment<3>(9);
  const double tp = sp / cp;
  dx(6) = w(0) + sr * tp * w(1) + cr * tp * w(2);
  dx(7) = cr * w(1) - sr * w(2);
  dx(8) = (sr * w(1) + cr * w(2)) / cp;

  const Eigen::Vector3d& inertia = params.inertia_diag;
  const Eigen::Vector3d jw = inertia.cwiseProduct(w);
  dx.segment<3>(9) = (u.segment<3>(1) - w.cross(jw)).cwiseQuotient(inertia);
  return dx;
}

Measurement NoiseStd::AsVector() const {
  Measurement std_dev;
  std_dev << position, position, position, angle, angle, angle;
  return std_dev;
}

Measurement Measure(const numkit::Mat& c, const VehicleState& x,
                    const Measurement& noise_std, Rng& rng) {
  Measurement y = c * x;
  for (int i = 0; i < kMeasDim; ++i) y(i) += noise_std(i) * rng.Normal();
  return y;
}

}  // namespace plant
}  // namespace srgov
