#include "srgov/control.h"

#include <cmath>
#include <sstream>

namespace srgov {
namespace control {

DesignWeights QuadrotorWeights(const QuadWeightConfig& config) {
  Vec q_k = Vec::Constant(plant::kStateDim, config.lqr_q_other);
  q_k.head<3>().setConstant(config.lqr_q_pos);

  Vec q_l = Vec::Constant(plant::kStateDim, config.obs_q_hidden);
  for (int idx : plant::kMeasuredIndices) q_l(idx) = config.obs_q;

  return DesignWeights{
      SymPosDef::Diagonal(q_k),
      SymPosDef::Diagonal(Vec::Constant(plant::kInputDim, config.lqr_r)),
      SymPosDef::Diagonal(q_l),
      SymPosDef::Diagonal(Vec::Constant(plant::kMeasDim, config.obs_r)),
  };
}

GainSet GainSet::Make(const plant::LinearModel& model, Mat k, Mat l) {
  if (!numkit::HurwitzCertificate(model.a - model.b * k)) {
    Throw(ErrorCode::kPreconditionViolated, "A - B K is not certified Hurwitz");
  }
  if (!numkit::HurwitzCertificate(model.a - l * model.c)) {
    Throw(ErrorCode::kPreconditionViolated, "A - L C is not certified Hurwitz");
  }
  return GainSet(std::move(k), std::move(l));
}

GainSet DesignGains(const plant::LinearModel& model,
                    const DesignWeights& weights) {
  const numkit::RiccatiResult controller =
      numkit::SolveRiccatiOde(model.a, model.b, weights.q_k, weights.r_k);
  const numkit::RiccatiResult estimator = numkit::SolveRiccatiOde(
      model.a.transpose(), model.c.transpose(), weights.q_l, weights.r_l);
  return GainSet::Make(model, controller.gain, estimator.gain.transpose());
}

SafetyMetric SafetyMetric::Make(SymPosDef p, double rho_s, double rho_m,
                                double d_safe) {
  if (!(0.0 < rho_s && rho_s < rho_m && rho_m < 1.0)) {
    std::ostringstream msg;
    msg << "ellipsoid sizes must satisfy 0 < rho_s < rho_m < 1, got rho_s="
        << rho_s << " rho_m=" << rho_m;
    Throw(ErrorCode::kInvalidArgument, msg.str());
  }
  if (!(d_safe > 0.0) || !std::isfinite(d_safe)) {
    Throw(ErrorCode::kInvalidArgument, "d_safe must be positive");
  }
  return SafetyMetric(std::move(p), rho_s, rho_m, d_safe);
}

double MaxBlockGain(const Mat& p, int dims) {
  const Mat block = p.topLeftCorner(dims, dims);
  const Mat eye = Mat::Identity(dims, dims);
  double lo = 0.0;
  double hi = block.trace();  // >= largest eigenvalue of a PSD block
  if (!(hi > 0.0)) {
    Throw(ErrorCode::kNotPositiveDefinite, "position block has no gain");
  }
  while (hi - lo > kGainBisectionTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (numkit::TryCholesky(mid * eye - block)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SafetyMetric BuildSafetyMetric(const Mat& a_cl, double rho_s, double rho_m,
                               double d_safe) {
  const SymPosDef p_raw = numkit::SolveLyapunov(
      a_cl, SymPosDef::Identity(static_cast<int>(a_cl.rows())));
  const double kappa = 1.0 / (d_safe * d_safe * MaxBlockGain(p_raw.matrix()));
  return SafetyMetric::Make(SymPosDef::Make(kappa * p_raw.matrix()), rho_s,
                            rho_m, d_safe);
}

double MaxPositionSemiAxis(const SymPosDef& p) {
  const int n = p.size();
  const Mat p_inv = numkit::LuSolve(p.matrix(), Mat::Identity(n, n));
  return std::sqrt(p_inv.diagonal().head(kPositionDims).maxCoeff());
}

Vec ControlInputGeneric(const Mat& k, const Vec& xhat, const Vec& x_sp) {
  return -(k * (xhat - x_sp));
}

Observer::Observer(const plant::LinearModel& model, const Mat& l)
    : a_obs_(model.a - l * model.c), b_(model.b), l_(l), lc_(l * model.c) {}

ObserverEstimate Observer::Step(const ObserverEstimate& xhat,
                                const plant::ControlInput& u,
                                const plant::Measurement& y, double dt) const {
  const ObserverEstimate drive = b_ * u + l_ * y;
  auto f = [&](const ObserverEstimate& s, const plant::ControlInput&) {
    return ObserverEstimate(a_obs_ * s + drive);
  };
  return numkit::Rk4Step(f, xhat, u, dt);
}

ObserverEstimate ObserverStep(const plant::LinearModel& model, const Mat& l,
                              const ObserverEstimate& xhat,
                              const plant::ControlInput& u,
                              const plant::Measurement& y, double dt) {
  return Observer(model, l).Step(xhat, u, y, dt);
}

}  // namespace control
}  // namespace srgov
