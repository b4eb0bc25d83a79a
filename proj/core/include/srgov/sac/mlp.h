#pragma once

// Fully connected network with rectifier hidden layers and a linear output.
// Samples are stored as columns, so a batch of B inputs is an (in x B)
// matrix. All parameters live in one flat vector in layer order, and within
// a layer as W (column-major, out x in) followed by b; optimizers, polyak
// averaging and the model file operate on that vector directly.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "srgov/random.h"

namespace srgov {
namespace sac {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

class Mlp {
 public:
  /// Zero-initialized network. Throws InvalidArgument unless there are at
  /// least two sizes and all are positive.
  explicit Mlp(std::vector<int> sizes);

  /// Weights and biases uniform on (-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static Mlp Random(std::vector<int> sizes, Rng& rng);

  /// Activations kept by Forward for use in Backward.
  struct Cache {
    std::vector<Mat> inputs;  // input to each layer
  };

  struct Gradients {
    Vec params;  // same layout as params()
    Mat input;   // d loss / d input, (in x B)
  };

  Mat Forward(const Mat& x, Cache* cache = nullptr) const;

  /// Reverse-mode pass for loss gradient `d_out` (out x B). The parameter
  /// gradient sums over the batch. With params=false only the input
  /// gradient is formed.
  Gradients Backward(const Cache& cache, const Mat& d_out,
                     bool params = true) const;

  const std::vector<int>& sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }

  const Vec& params() const { return params_; }
  Vec& params() { return params_; }

  Eigen::Map<const Mat> weight(int layer) const;
  Eigen::Map<Mat> weight(int layer);
  Eigen::Map<const Vec> bias(int layer) const;
  Eigen::Map<Vec> bias(int layer);

 private:
  std::vector<int> sizes_;
  std::vector<std::ptrdiff_t> offsets_;  // start of W for each layer
  Vec params_;
};

}  // namespace sac
}  // namespace srgov
