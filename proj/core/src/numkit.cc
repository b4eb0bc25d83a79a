#include "srgov/numkit.h"

#include <cmath>
#include <sstream>

namespace srgov {
namespace numkit {

namespace {

void RequireSquare(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << what << " must be square, got " << a.rows() << "x" << a.cols();
    Throw(ErrorCode::kInvalidArgument, msg.str());
  }
}

double MaxAbs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Column-major vec(): vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P).
Mat LyapunovOperator(const Mat& a_cl) {
  const Eigen::Index n = a_cl.rows();
  const Mat at = a_cl.transpose();
  Mat op = Mat::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    op.block(j * n, j * n, n, n) += at;
    for (Eigen::Index i = 0; i < n; ++i) {
      op.block(j * n, i * n, n, n).diagonal().array() += at(j, i);
    }
  }
  return op;
}

Mat RiccatiRhs(const Mat& a, const Mat& q, const Mat& s, const Mat& p) {
  Mat dp = a.transpose() * p + p * a - p * s * p + q;
  return 0.5 * (dp + dp.transpose());
}

}  // namespace

SymPosDef SymPosDef::Make(const Mat& m) {
  RequireSquare(m, "SymPosDef");
  Cholesky(m);
  return SymPosDef(0.5 * (m + m.transpose()));
}

SymPosDef SymPosDef::Identity(int n) { return SymPosDef(Mat::Identity(n, n)); }

SymPosDef SymPosDef::Diagonal(const Vec& diag) {
  return Make(diag.asDiagonal().toDenseMatrix());
}

Mat LuSolve(const Mat& a, const Mat& rhs) {
  RequireSquare(a, "lu_solve matrix");
  if (rhs.rows() != a.rows()) {
    Throw(ErrorCode::kInvalidArgument, "lu_solve rhs row count mismatch");
  }
  const Eigen::Index n = a.rows();
  Mat lu = a;
  Mat x = rhs;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    const double pivot = lu(pivot_row, k);
    if (std::abs(pivot) < kPivotTolerance) {
      std::ostringstream msg;
      msg << "pivot " << pivot << " at column " << k;
      Throw(ErrorCode::kSingularMatrix, msg.str());
    }
    if (pivot_row != k) {
      lu.row(k).swap(lu.row(pivot_row));
      x.row(k).swap(x.row(pivot_row));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / pivot;
      if (factor == 0.0) continue;
      lu.row(i).tail(n - k - 1) -= factor * lu.row(k).tail(n - k - 1);
      x.row(i) -= factor * x.row(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (k + 1 < n) {
      x.row(k) -= lu.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1);
    }
    x.row(k) /= lu(k, k);
  }
  return x;
}

Mat Cholesky(const Mat& p) {
  RequireSquare(p, "cholesky input");
  const Eigen::Index n = p.rows();
  const double scale = MaxAbs(p);
  if (MaxAbs(p - p.transpose()) > kSymmetryTolerance * scale) {
    Throw(ErrorCode::kNotSymmetric, "cholesky input is not symmetric");
  }
  Mat l = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = p(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      std::ostringstream msg;
      msg << "pivot " << diag << " at index " << j;
      Throw(ErrorCode::kNotPositiveDefinite, msg.str());
    }
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = p(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::optional<Mat> TryCholesky(const Mat& p) {
  try {
    return Cholesky(p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

SymPosDef SolveLyapunov(const Mat& a_cl, const SymPosDef& q) {
  RequireSquare(a_cl, "lyapunov matrix");
  const Eigen::Index n = a_cl.rows();
  if (q.size() != n) {
    Throw(ErrorCode::kInvalidArgument, "lyapunov q dimension mismatch");
  }
  const Vec rhs = -Eigen::Map<const Vec>(q.matrix().data(), n * n);
  const Mat vec_p = LuSolve(LyapunovOperator(a_cl), rhs);
  Mat p = Eigen::Map<const Mat>(vec_p.data(), n, n);
  p = 0.5 * (p + p.transpose());
  const double residual = LyapunovResidual(a_cl, p, q.matrix());
  if (!(residual <= kLyapunovResidualTolerance * q.matrix().norm())) {
    std::ostringstream msg;
    msg << "lyapunov residual " << residual << " exceeds tolerance";
    Throw(ErrorCode::kSingularMatrix, msg.str());
  }
  return SymPosDef::Make(p);
}

double LyapunovResidual(const Mat& a_cl, const Mat& p, const Mat& q) {
  return (a_cl.transpose() * p + p * a_cl + q).norm();
}

bool HurwitzCertificate(const Mat& a_cl) {
  if (a_cl.rows() != a_cl.cols() || !a_cl.allFinite()) return false;
  try {
    const SymPosDef p =
        SolveLyapunov(a_cl, SymPosDef::Identity(static_cast<int>(a_cl.rows())));
    return TryCholesky(p.matrix()).has_value();
  } catch (const Error&) {
    return false;
  }
}

RiccatiResult SolveRiccatiOde(const Mat& a, const Mat& b,
                              const SymPosDef& q_cost, const SymPosDef& r_cost,
                              const RiccatiOptions& options) {
  RequireSquare(a, "riccati A");
  const Eigen::Index n = a.rows();
  if (b.rows() != n || q_cost.size() != n || r_cost.size() != b.cols()) {
    Throw(ErrorCode::kInvalidArgument, "riccati dimension mismatch");
  }
  const Mat r_inv_bt = LuSolve(r_cost.matrix(), b.transpose());
  const Mat s = b * r_inv_bt;
  const Mat& q = q_cost.matrix();
  const double h = options.step;

  Mat p = Mat::Zero(n, n);
  for (std::int64_t step = 0; step < options.max_steps; ++step) {
    const Mat k1 = RiccatiRhs(a, q, s, p);
    if (k1.norm() < options.stationarity * (1.0 + p.norm())) {
      RiccatiResult result{r_inv_bt * p, SymPosDef::Make(p), step};
      if (!HurwitzCertificate(a - b * result.gain)) {
        Throw(ErrorCode::kNoConvergence,
              "stationary riccati solution does not stabilize the pair");
      }
      return result;
    }
    const Mat k2 = RiccatiRhs(a, q, s, p + 0.5 * h * k1);
    const Mat k3 = RiccatiRhs(a, q, s, p + 0.5 * h * k2);
    const Mat k4 = RiccatiRhs(a, q, s, p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!p.allFinite()) {
      Throw(ErrorCode::kNoConvergence, "riccati integration diverged");
    }
  }
  std::ostringstream msg;
  msg << "riccati not stationary after " << options.max_steps << " steps";
  Throw(ErrorCode::kNoConvergence, msg.str());
}

double RiccatiResidual(const Mat& a, const Mat& b, const Mat& q,
                       const Mat& r, const Mat& p) {
  const Mat r_inv_bt = LuSolve(r, b.transpose());
  return (a.transpose() * p + p * a - p * b * r_inv_bt * p + q).norm();
}

}  // namespace numkit
}  // namespace srgov
