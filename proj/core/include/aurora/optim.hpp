#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aurora/autodiff.hpp"

namespace aurora::ad {

/// RMSprop hyper-parameters plus one running mean-square accumulator per
/// parameter tensor.
struct OptimizerState {
  double learning_rate = 1e-3;
  double decay = 0.9;
  double epsilon = 1e-8;
  std::vector<std::vector<double>> mean_square;
};

/// v <- decay v + (1 - decay) g^2 ; p <- p - lr g / (sqrt(v) + eps), element-wise.
void rmsprop_update(std::span<double> param, std::span<const double> grad,
                    std::span<double> mean_square, const OptimizerState& state);

/// Applies rmsprop_update to every parameter using its accumulated gradient.
/// Accumulators are created on first use.
void rmsprop_step(std::span<Tensor> params, OptimizerState& state);

/// He-normal weights, std = sqrt(2 / fan_in) with fan_in the product of all
/// dims but the first. Deterministic per seed.
Tensor initialize_weights(const Shape& shape, std::uint64_t seed);

}  // namespace aurora::ad
