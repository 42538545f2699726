#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aurora/error.hpp"

namespace aurora::ad {

using Shape = std::vector<int>;

std::size_t element_count(const Shape& shape);
std::string to_string(const Shape& shape);

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  ///< empty until a gradient reaches the node
  bool requires_grad = false;
  std::function<void(Node&)> backward;

  std::vector<double>& ensure_grad() {
    if (grad.empty()) grad.assign(value.size(), 0.0);
    return grad;
  }
};

/// Shared handle to a value in the computation graph. Copies alias the same
/// storage.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Shape shape, std::vector<double> values);
  static Tensor zeros(Shape shape);
  /// A leaf whose gradient is accumulated by Tape::backward.
  static Tensor parameter(Shape shape, std::vector<double> values);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int dim(std::size_t i) const { return node_->shape.at(i); }
  std::size_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  std::span<double> values() { return node_->value; }
  std::span<const double> values() const { return node_->value; }
  double item() const;
  /// Gradient after backward; zeros if nothing reached this tensor.
  std::span<const double> grad() const;
  void zero_grad() { node_->grad.clear(); }

  Node& node() const { return *node_; }
  std::shared_ptr<Node> shared() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}
  friend class Tape;
  std::shared_ptr<Node> node_;
};

/// Records operations in creation order and replays them backwards.
/// Recording is skipped for values that do not depend on any parameter, so an
/// inference pass records nothing.
class Tape {
 public:
  /// Creates the output node for an op. `backward` is kept only when some
  /// input requires a gradient.
  Tensor make(Shape shape, std::vector<double> values, bool requires_grad,
              std::function<void(Node&)> backward);

  /// Seeds d(loss)/d(loss) = 1 and propagates to every recorded input.
  /// `loss` must hold a single element.
  void backward(const Tensor& loss);

  std::size_t recorded() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  std::vector<std::shared_ptr<Node>> nodes_;
};

// Ops. Feature maps are [C, H, W]; conv weights [O, C, K, K]; biases [O].

/// Zero-padded 2-D convolution with square kernels.
Tensor conv2d(Tape& tape, const Tensor& x, const Tensor& weight, const Tensor& bias, int stride,
              int padding);
Tensor relu(Tape& tape, const Tensor& x);
Tensor sigmoid(Tape& tape, const Tensor& x);
/// Nearest-neighbour 2x upsampling of a [C, H, W] map.
Tensor upsample2x(Tape& tape, const Tensor& x);
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor scale(Tape& tape, const Tensor& x, double factor);
/// [M, K] x [K, N] -> [M, N]
Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
/// Reshapes to [1, size] (a batch of one row).
Tensor flatten(Tape& tape, const Tensor& x);
/// Reshape without copying semantics in the graph (values are copied).
Tensor reshape(Tape& tape, const Tensor& x, Shape shape);
/// Softmax across the channel axis of a [C, H, W] map, per pixel.
Tensor softmax_channels(Tape& tape, const Tensor& x);
/// Mean of all elements, shape [1].
Tensor mean(Tape& tape, const Tensor& x);
/// Sum of all elements, shape [1].
Tensor sum(Tape& tape, const Tensor& x);
/// Per-channel spatial mean of a [C, H, W] map, shape [C].
Tensor channel_mean(Tape& tape, const Tensor& x);
/// Channels [begin, end) of a [C, H, W] map.
Tensor slice_channels(Tape& tape, const Tensor& x, int begin, int end);
/// Channel-wise concatenation of [C_i, H, W] maps.
Tensor concat_channels(Tape& tape, const std::vector<Tensor>& parts);
/// Fully connected layer on a vector: weight [out, in] x x[in] + bias[out].
Tensor linear(Tape& tape, const Tensor& x, const Tensor& weight, const Tensor& bias);

// Losses (scalar outputs of shape [1]).

/// Cross-entropy of a per-pixel softmax over channels, summed over pixels.
/// `labels` are 0-based class indices, one per pixel.
Tensor softmax_cross_entropy(Tape& tape, const Tensor& logits, std::span<const int> labels);
/// -t log p - (1 - t) log (1 - p) on a single probability.
Tensor binary_cross_entropy(Tape& tape, const Tensor& probability, double target);
/// Squared Euclidean distance to a constant target.
Tensor squared_error(Tape& tape, const Tensor& prediction, std::span<const double> target);

}  // namespace aurora::ad
