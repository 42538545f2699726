#include "aurora/optim.hpp"

#include <cmath>
#include <random>

namespace aurora::ad {

void rmsprop_update(std::span<double> param, std::span<const double> grad,
                    std::span<double> mean_square, const OptimizerState& state) {
  if (param.size() != grad.size() || param.size() != mean_square.size()) {
    throw ValidationError("rmsprop: parameter, gradient and accumulator sizes differ");
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    mean_square[i] = state.decay * mean_square[i] + (1.0 - state.decay) * g * g;
    param[i] -= state.learning_rate * g / (std::sqrt(mean_square[i]) + state.epsilon);
  }
}

void rmsprop_step(std::span<Tensor> params, OptimizerState& state) {
  if (state.mean_square.empty()) {
    for (const Tensor& p : params) state.mean_square.emplace_back(p.size(), 0.0);
  }
  if (state.mean_square.size() != params.size()) {
    throw ValidationError("rmsprop: optimizer state was built for a different parameter set");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    rmsprop_update(params[i].values(), params[i].grad(), state.mean_square[i], state);
  }
}

Tensor initialize_weights(const Shape& shape, std::uint64_t seed) {
  if (shape.empty() || element_count(shape) == 0) {
    throw ValidationError("cannot initialise an empty tensor");
  }
  const std::size_t fan_in = shape.size() == 1 ? 1 : element_count(shape) / shape[0];
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
  std::vector<double> values(element_count(shape));
  for (double& v : values) v = normal(rng);
  return Tensor::parameter(shape, std::move(values));
}

}  // namespace aurora::ad
