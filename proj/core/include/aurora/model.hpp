#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aurora/autodiff.hpp"
#include "aurora/checkpoint.hpp"
#include "aurora/image.hpp"
#include "aurora/normalcue.hpp"
#include "aurora/photometry.hpp"

namespace aurora {

/// Channel counts of the multi-task network. The encoder is a stride-1 stem
/// followed by three stride-2 stages (8x downsampling); both decoders upsample
/// once, so logits come out at a quarter of the input resolution.
struct ModelConfig {
  int input_size = 32;
  std::array<int, 4> encoder_channels{8, 16, 16, 16};
  int decoder_channels = 8;
  int classifier_hidden = 16;
  int regressor_hidden = 32;

  void validate() const;
  int feature_size() const noexcept { return input_size / 8; }
  int logit_size() const noexcept { return input_size / 4; }
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Width of the regressor output: Δ one-hot light type (4) + Δ intensity.
inline constexpr int kResidualSize = 5;

/// Shared encoder S, depth decoder U_D, material decoder U_M, liveness
/// classifier C and light regressor R.
class Model {
 public:
  Model() = default;
  Model(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const noexcept { return config_; }
  std::span<ad::Tensor> parameters() noexcept { return params_; }
  std::span<const ad::Tensor> parameters() const noexcept { return params_; }
  const std::vector<std::string>& parameter_names() const noexcept { return names_; }
  const ad::Tensor& parameter(const std::string& name) const;
  std::size_t parameter_count() const;

  /// Liveness threshold calibrated on validation data; stored with the weights.
  double tau_cls() const noexcept { return tau_cls_; }
  void set_tau_cls(double tau) noexcept { tau_cls_ = tau; }

  /// Rounds every weight to the nearest float, the precision of checkpoints.
  void round_to_float();
  /// Independent copy (weights are not shared).
  Model clone() const;

  std::vector<ad::NamedTensor> to_checkpoint() const;
  /// Throws IoError when tensors are missing or their shapes disagree with the
  /// stored configuration.
  static Model from_checkpoint(const std::vector<ad::NamedTensor>& tensors);

 private:
  void add(const std::string& name, ad::Tensor t);

  ModelConfig config_;
  std::vector<std::string> names_;
  std::vector<ad::Tensor> params_;
  double tau_cls_ = 0.5;
};

struct CueOutputs {
  ad::Tensor features;         ///< [C, H/8, W/8]
  ad::Tensor depth_logits;     ///< [16, H/4, W/4]
  ad::Tensor material_logits;  ///< [4, H/4, W/4]
  ad::Tensor cls_score;        ///< [1], in (0, 1)
};

/// Encoder, channel bisection, both decoders and the classifier on one
/// network input map (see cue_network_input).
CueOutputs forward(const Model& model, ad::Tape& tape, const ScalarMap& cue_input);
CueOutputs forward(const Model& model, ad::Tape& tape, const NormalCue& cue);
/// Encoder and classifier only; decoders are skipped. Returns the score [1].
ad::Tensor forward_classifier(const Model& model, ad::Tape& tape, const ScalarMap& cue_input);

/// Stacks two aligned RGB frames into the 6-channel regressor input.
ad::Tensor stack_frames(const Image<float>& first, const Image<float>& second);
/// Width of the pooled regressor feature.
inline constexpr int kRegressorFeatures = 3;
/// Fixed front end of the regressor: the frame difference F_i - F_{i+1}
/// summed over the image per channel, divided by the L1 norm of that sum. The
/// result depends on the two lights only, not on albedo, shading or ambient.
ad::Tensor regressor_features(const ad::Tensor& stacked_pair);
/// Light residual estimate R(F_i, F_{i+1}) from a stacked pair, shape [5].
ad::Tensor regress(const Model& model, ad::Tape& tape, const ad::Tensor& stacked_pair);
/// Trainable part of the regressor on precomputed features.
ad::Tensor regress_features(const Model& model, ad::Tape& tape, const ad::Tensor& features);

/// Categorical label map reduced by `factor` using a per-block majority vote
/// (ties go to the smaller label).
LabelMap downsample_labels(const LabelMap& labels, int factor);

}  // namespace aurora
