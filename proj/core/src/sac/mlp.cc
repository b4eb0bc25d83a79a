#include "srgov/sac/mlp.h"

#include <cmath>
#include <utility>

#include "srgov/error.h"

namespace srgov {
namespace sac {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) {
    Throw(ErrorCode::kInvalidArgument, "an Mlp needs at least two sizes");
  }
  std::ptrdiff_t total = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] <= 0) {
      Throw(ErrorCode::kInvalidArgument, "Mlp layer sizes must be positive");
    }
    if (i + 1 < sizes_.size()) {
      offsets_.push_back(total);
      total += static_cast<std::ptrdiff_t>(sizes_[i + 1]) * (sizes_[i] + 1);
    }
  }
  params_ = Vec::Zero(total);
}

Mlp Mlp::Random(std::vector<int> sizes, Rng& rng) {
  Mlp net(std::move(sizes));
  for (int l = 0; l < net.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.sizes_[l]));
    auto w = net.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = rng.Uniform(-bound, bound);
      }
    }
    auto b = net.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.Uniform(-bound, bound);
  }
  return net;
}

Eigen::Map<const Mat> Mlp::weight(int layer) const {
  return Eigen::Map<const Mat>(params_.data() + offsets_[layer],
                               sizes_[layer + 1], sizes_[layer]);
}

Eigen::Map<Mat> Mlp::weight(int layer) {
  return Eigen::Map<Mat>(params_.data() + offsets_[layer], sizes_[layer + 1],
                         sizes_[layer]);
}

Eigen::Map<const Vec> Mlp::bias(int layer) const {
  const std::ptrdiff_t start =
      offsets_[layer] + static_cast<std::ptrdiff_t>(sizes_[layer + 1]) * sizes_[layer];
  return Eigen::Map<const Vec>(params_.data() + start, sizes_[layer + 1]);
}

Eigen::Map<Vec> Mlp::bias(int layer) {
  const std::ptrdiff_t start =
      offsets_[layer] + static_cast<std::ptrdiff_t>(sizes_[layer + 1]) * sizes_[layer];
  return Eigen::Map<Vec>(params_.data() + start, sizes_[layer + 1]);
}

Mat Mlp::Forward(const Mat& x, Cache* cache) const {
  if (x.rows() != input_dim()) {
    Throw(ErrorCode::kInvalidArgument, "Mlp input has the wrong dimension");
  }
  if (cache != nullptr) cache->inputs.clear();
  Mat h = x;
  for (int l = 0; l < num_layers(); ++l) {
    if (cache != nullptr) cache->inputs.push_back(h);
    Mat z = weight(l) * h;
    z.colwise() += bias(l);
    if (l + 1 < num_layers()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Mlp::Gradients Mlp::Backward(const Cache& cache, const Mat& d_out,
                             bool params) const {
  if (static_cast<int>(cache.inputs.size()) != num_layers() ||
      d_out.rows() != output_dim() ||
      d_out.cols() != cache.inputs.front().cols()) {
    Throw(ErrorCode::kInvalidArgument, "Mlp backward does not match the cache");
  }
  Gradients grads;
  if (params) grads.params = Vec::Zero(params_.size());
  Mat delta = d_out;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Mat& input = cache.inputs[l];
    if (params) {
      const std::ptrdiff_t w_size =
          static_cast<std::ptrdiff_t>(sizes_[l + 1]) * sizes_[l];
      Eigen::Map<Mat>(grads.params.data() + offsets_[l], sizes_[l + 1],
                      sizes_[l]) = delta * input.transpose();
      Eigen::Map<Vec>(grads.params.data() + offsets_[l] + w_size,
                      sizes_[l + 1]) = delta.rowwise().sum();
    }
    Mat d_input = weight(l).transpose() * delta;
    if (l > 0) {
      // The input of layer l is the rectified output of layer l - 1, so a
      // zero entry means the unit was inactive.
      d_input = (input.array() > 0.0).select(d_input, 0.0);
    }
    delta = std::move(d_input);
  }
  grads.input = std::move(delta);
  return grads;
}

}  // namespace sac
}  // namespace srgov
