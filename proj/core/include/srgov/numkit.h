#pragma once

// Dense linear algebra and ODE kernels sized for the 12-state quadrotor:
// LU and Cholesky factorizations, the continuous Lyapunov equation, the
// Riccati equation integrated to steady state, and a classical RK4 step.
//
// Stability is never decided with an eigensolver. A matrix is certified
// Hurwitz when its Lyapunov equation has a positive definite solution.

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "srgov/error.h"

namespace srgov {
namespace numkit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Tolerances that form part of the kernel contract.
inline constexpr double kPivotTolerance = 1e-13;
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kSymPosDefSymmetryTolerance = 1e-12;
inline constexpr double kLuResidualTolerance = 1e-10;
inline constexpr double kLyapunovResidualTolerance = 1e-8;
inline constexpr double kRiccatiStep = 1e-3;
inline constexpr double kRiccatiStationarity = 1e-9;
inline constexpr std::int64_t kRiccatiDefaultMaxSteps = 10'000'000;

/// Symmetric positive definite matrix. Constructed only through Make(),
/// which symmetrizes and certifies positive definiteness with Cholesky.
class SymPosDef {
 public:
  /// Throws NotSymmetric or NotPositiveDefinite.
  static SymPosDef Make(const Mat& m);
  static SymPosDef Identity(int n);
  static SymPosDef Diagonal(const Vec& diag);

  const Mat& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit SymPosDef(Mat m) : m_(std::move(m)) {}
  Mat m_;
};

/// Solves a * X = rhs by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot magnitude falls below kPivotTolerance.
Mat LuSolve(const Mat& a, const Mat& rhs);

/// Lower-triangular L with L * L^T = p. Throws NotSymmetric when the
/// relative asymmetry exceeds kSymmetryTolerance and NotPositiveDefinite when
/// a pivot is not strictly positive.
Mat Cholesky(const Mat& p);

/// Non-throwing variant; nullopt whenever Cholesky() would throw.
std::optional<Mat> TryCholesky(const Mat& p);

/// Solves a_cl^T P + P a_cl = -q through Kronecker vectorization.
/// Throws SingularMatrix when the Lyapunov operator is singular and
/// NotPositiveDefinite when the solution is not positive definite; either
/// means a_cl is not Hurwitz.
SymPosDef SolveLyapunov(const Mat& a_cl, const SymPosDef& q);

/// Frobenius norm of a^T P + P a + q.
double LyapunovResidual(const Mat& a_cl, const Mat& p, const Mat& q);

/// True iff SolveLyapunov(a_cl, I) succeeds with a Cholesky-certified result.
bool HurwitzCertificate(const Mat& a_cl);

struct RiccatiResult {
  Mat gain;          // R^-1 B^T P
  SymPosDef p_care;  // steady-state Riccati solution
  std::int64_t steps = 0;
};

struct RiccatiOptions {
  double step = kRiccatiStep;
  double stationarity = kRiccatiStationarity;
  std::int64_t max_steps = kRiccatiDefaultMaxSteps;
};

/// Integrates dP/dt = A^T P + P A - P B R^-1 B^T P + Q forward from P = 0
/// with RK4 until ||dP/dt||_F < stationarity * (1 + ||P||_F).
/// Throws NoConvergence after max_steps.
RiccatiResult SolveRiccatiOde(const Mat& a, const Mat& b,
                              const SymPosDef& q_cost, const SymPosDef& r_cost,
                              const RiccatiOptions& options = {});

/// Frobenius norm of A^T P + P A - P B R^-1 B^T P + Q.
double RiccatiResidual(const Mat& a, const Mat& b, const Mat& q,
                       const Mat& r, const Mat& p);

/// Quadratic form (v - c)^T P (v - c).
template <typename DerivedV, typename DerivedC>
double PNormSq(const Mat& p, const Eigen::MatrixBase<DerivedV>& v,
               const Eigen::MatrixBase<DerivedC>& c) {
  const auto d = (v - c).eval();
  return d.dot(p * d);
}

template <typename DerivedV, typename DerivedC>
double PNormSq(const SymPosDef& p, const Eigen::MatrixBase<DerivedV>& v,
               const Eigen::MatrixBase<DerivedC>& c) {
  return PNormSq(p.matrix(), v, c);
}

/// One classical RK4 step with the input held constant over dt.
/// f(x, u) returns dx/dt. Throws NonFinite when the result contains NaN/Inf.
template <typename F, typename State, typename Input>
State Rk4Step(F&& f, const State& x, const Input& u, double dt) {
  if (!(dt > 0.0)) {
    Throw(ErrorCode::kInvalidArgument, "rk4 step requires dt > 0");
  }
  const State k1 = f(x, u);
  const State k2 = f(State(x + (0.5 * dt) * k1), u);
  const State k3 = f(State(x + (0.5 * dt) * k2), u);
  const State k4 = f(State(x + dt * k3), u);
  State next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    Throw(ErrorCode::kNonFinite, "rk4 step produced a non-finite state");
  }
  return next;
}

}  // namespace numkit
}  // namespace srgov
