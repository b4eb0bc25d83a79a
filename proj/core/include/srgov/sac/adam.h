#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace srgov {
namespace sac {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias-corrected moments over a flat parameter vector.
class Adam {
 public:
  Adam(Eigen::Index size, AdamConfig config);

  /// params -= lr * m_hat / (sqrt(v_hat) + eps). Throws InvalidArgument on a
  /// size mismatch.
  void Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  const AdamConfig& config() const { return config_; }
  const Eigen::VectorXd& m() const { return m_; }
  const Eigen::VectorXd& v() const { return v_; }
  std::int64_t steps() const { return t_; }

  /// Restores moments and step count, e.g. from a model file.
  void SetState(Eigen::VectorXd m, Eigen::VectorXd v, std::int64_t steps);

 private:
  AdamConfig config_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  std::int64_t t_ = 0;
};

}  // namespace sac
}  // namespace srgov
