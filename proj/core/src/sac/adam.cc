#include "srgov/sac/adam.h"

#include <cmath>
#include <utility>

#include "srgov/error.h"

namespace srgov {
namespace sac {

Adam::Adam(Eigen::Index size, AdamConfig config)
    : config_(config),
      m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)) {
  if (!(config_.lr > 0.0)) {
    Throw(ErrorCode::kInvalidArgument, "Adam learning rate must be positive");
  }
}

void Adam::Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    Throw(ErrorCode::kInvalidArgument, "Adam step size mismatch");
  }
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  params.array() -= config_.lr * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + config_.eps);
}

void Adam::SetState(Eigen::VectorXd m, Eigen::VectorXd v, std::int64_t steps) {
  if (m.size() != m_.size() || v.size() != v_.size() || steps < 0) {
    Throw(ErrorCode::kInvalidArgument, "Adam state does not match");
  }
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = steps;
}

}  // namespace sac
}  // namespace srgov
