#pragma once

// Gain synthesis, the Lyapunov safety metric, the feedback law and the
// Luenberger observer.
//
// Observer sign convention: the estimator is integrated in the corrected form
//   xhat_dot = A xhat + B u + L (y - C xhat)
// so that the estimation error e = x - xhat obeys e_dot = (A - L C) e.

#include <utility>

#include "srgov/numkit.h"
#include "srgov/plant.h"

namespace srgov {
namespace control {

using numkit::Mat;
using numkit::SymPosDef;
using numkit::Vec;
using ObserverEstimate = plant::VehicleState;

/// Cost weights for the two Riccati designs.
struct DesignWeights {
  SymPosDef q_k;  // state cost for the feedback gain
  SymPosDef r_k;  // input cost for the feedback gain
  SymPosDef q_l;  // process weight for the observer (dual) design
  SymPosDef r_l;  // measurement weight for the observer (dual) design
};

/// Scalar knobs for the quadrotor defaults. obs_q weights the measured
/// states (position, attitude) and obs_q_hidden the unmeasured ones
/// (velocity, body rates); see DesignWeights for how they are laid out.
struct QuadWeightConfig {
  double lqr_q_pos = 10.0;
  double lqr_q_other = 1.0;
  double lqr_r = 1.0;
  double obs_q = 1.0;
  double obs_q_hidden = 80.0;
  double obs_r = 0.01;
};

DesignWeights QuadrotorWeights(const QuadWeightConfig& config);

/// State feedback K and observer gain L, both certified to stabilize.
class GainSet {
 public:
  /// Throws PreconditionViolated unless A - B K and A - L C are certified
  /// Hurwitz.
  static GainSet Make(const plant::LinearModel& model, Mat k, Mat l);

  const Mat& k() const { return k_; }
  const Mat& l() const { return l_; }

 private:
  GainSet(Mat k, Mat l) : k_(std::move(k)), l_(std::move(l)) {}
  Mat k_;
  Mat l_;
};

/// K from the Riccati solve on (A, B); L from the dual solve on
/// (A^T, C^T), transposed.
GainSet DesignGains(const plant::LinearModel& model,
                    const DesignWeights& weights);

/// Lyapunov metric P of the closed loop plus the two ellipsoid sizes.
class SafetyMetric {
 public:
  /// Throws InvalidArgument unless 0 < rho_s < rho_m < 1 and d_safe > 0.
  static SafetyMetric Make(SymPosDef p, double rho_s, double rho_m,
                           double d_safe);

  const SymPosDef& p() const { return p_; }
  double rho_s() const { return rho_s_; }
  double rho_m() const { return rho_m_; }
  double d_safe() const { return d_safe_; }

  template <typename DerivedV, typename DerivedC>
  double NormSq(const Eigen::MatrixBase<DerivedV>& v,
                const Eigen::MatrixBase<DerivedC>& c) const {
    return numkit::PNormSq(p_, v, c);
  }

  bool InMissionSet(double norm_sq) const { return norm_sq <= rho_m_; }
  bool Recovered(double norm_sq) const { return norm_sq <= rho_s_; }

 private:
  SafetyMetric(SymPosDef p, double rho_s, double rho_m, double d_safe)
      : p_(std::move(p)), rho_s_(rho_s), rho_m_(rho_m), d_safe_(d_safe) {}
  SymPosDef p_;
  double rho_s_;
  double rho_m_;
  double d_safe_;
};

inline constexpr int kPositionDims = 3;
inline constexpr double kGainBisectionTolerance = 1e-14;

/// Largest value of u^T P u over unit vectors u supported on the first
/// `dims` coordinates. Computed by bisection on Cholesky certificates of
/// t I - P_block; no eigensolver is involved.
double MaxBlockGain(const Mat& p, int dims = kPositionDims);

/// P = kappa * P_raw, where P_raw solves the closed-loop Lyapunov equation
/// with Q = I and kappa makes the largest P-norm of a unit position
/// displacement equal 1 / d_safe. Equivalently, E(1, c) contains every
/// position offset of length d_safe around c and touches that ball.
SafetyMetric BuildSafetyMetric(const Mat& a_cl, double rho_s, double rho_m,
                               double d_safe);

/// Largest coordinate extent sqrt((P^-1)_ii) of E(1, 0) over the position
/// axes. Reported for comparison with d_safe.
double MaxPositionSemiAxis(const SymPosDef& p);

/// u = -K (xhat - x_sp).
template <typename DerivedX, typename DerivedS>
plant::ControlInput ControlLaw(const Mat& k, const Eigen::MatrixBase<DerivedX>& xhat,
                               const Eigen::MatrixBase<DerivedS>& x_sp) {
  return -(k * (xhat - x_sp));
}

/// Generic-size variant used by the scalar and linearity checks.
Vec ControlInputGeneric(const Mat& k, const Vec& xhat, const Vec& x_sp);

/// Observer with its matrices fixed at construction; used in the simulation
/// hot loop.
class Observer {
 public:
  Observer(const plant::LinearModel& model, const Mat& l);

  /// One RK4 step of the observer ODE with u and y held over dt.
  ObserverEstimate Step(const ObserverEstimate& xhat,
                        const plant::ControlInput& u,
                        const plant::Measurement& y, double dt) const;

  /// Advances plant and observer together by one RK4 step. Inside the step
  /// the observer sees y(t) = C x(t) + noise with the noise sample held, so
  /// for a linear plant e = x - xhat follows e' = (A - L C) e to integrator
  /// accuracy. `plant_f(x, u)` returns dx/dt.
  template <typename PlantF>
  std::pair<plant::VehicleState, ObserverEstimate> StepCoupled(
      PlantF&& plant_f, const plant::VehicleState& x,
      const ObserverEstimate& xhat, const plant::ControlInput& u,
      const plant::Measurement& noise, double dt) const {
    using Joint = Eigen::Matrix<double, 2 * plant::kStateDim, 1>;
    constexpr int n = plant::kStateDim;
    const ObserverEstimate drive = b_ * u + l_ * noise;
    auto f = [&](const Joint& z, const plant::ControlInput& in) {
      Joint dz;
      dz.head<n>() = plant_f(plant::VehicleState(z.head<n>()), in);
      dz.tail<n>() = a_obs_ * z.tail<n>() + drive + lc_ * z.head<n>();
      return dz;
    };
    Joint z;
    z << x, xhat;
    const Joint next = numkit::Rk4Step(f, z, u, dt);
    return {next.head<n>(), next.tail<n>()};
  }

 private:
  Eigen::Matrix<double, plant::kStateDim, plant::kStateDim> a_obs_;
  Eigen::Matrix<double, plant::kStateDim, plant::kInputDim> b_;
  Eigen::Matrix<double, plant::kStateDim, plant::kMeasDim> l_;
  Eigen::Matrix<double, plant::kStateDim, plant::kStateDim> lc_;
};

/// One RK4 step of the observer ODE with u and y held over dt.
ObserverEstimate ObserverStep(const plant::LinearModel& model, const Mat& l,
                              const ObserverEstimate& xhat,
                              const plant::ControlInput& u,
                              const plant::Measurement& y, double dt);

}  // namespace control
}  // namespace srgov
