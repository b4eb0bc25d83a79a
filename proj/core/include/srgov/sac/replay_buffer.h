#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "srgov/random.h"

namespace srgov {
namespace sac {

struct Transition {
  Eigen::VectorXd s;
  Eigen::VectorXd a;  // raw action in (-1, 1)
  double r = 0.0;
  Eigen::VectorXd s_next;
  bool done = false;
};

/// Column-per-sample batch.
struct Batch {
  Eigen::MatrixXd s;       // state_dim x B
  Eigen::MatrixXd a;       // action_dim x B
  Eigen::RowVectorXd r;    // 1 x B
  Eigen::MatrixXd s_next;  // state_dim x B
  Eigen::RowVectorXd done; // 1 x B, 0 or 1
  std::vector<std::int64_t> indices;
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten once
/// full.
class ReplayBuffer {
 public:
  ReplayBuffer(std::int64_t capacity, int state_dim, int action_dim);

  /// Throws InvalidArgument on a dimension mismatch.
  void Add(const Transition& t);

  /// Uniform sample of `batch` distinct entries. Throws InvalidArgument if
  /// fewer than `batch` entries are stored.
  Batch Sample(std::int64_t batch, Rng& rng) const;

  std::int64_t size() const { return size_; }
  std::int64_t capacity() const { return capacity_; }

 private:
  std::int64_t capacity_;
  int state_dim_;
  int action_dim_;
  std::int64_t size_ = 0;
  std::int64_t next_ = 0;
  Eigen::MatrixXd s_;
  Eigen::MatrixXd a_;
  Eigen::RowVectorXd r_;
  Eigen::MatrixXd s_next_;
  Eigen::RowVectorXd done_;
};

/// `count` distinct indices uniform on [0, n), by Floyd's algorithm.
std::vector<std::int64_t> SampleDistinct(std::int64_t n, std::int64_t count,
                                         Rng& rng);

}  // namespace sac
}  // namespace srgov
