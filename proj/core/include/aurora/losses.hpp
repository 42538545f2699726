#pragma once

#include <span>
#include <vector>

#include "aurora/autodiff.hpp"
#include "aurora/captcha_check.hpp"
#include "aurora/model.hpp"

namespace aurora {

/// Weights of the reconstruction terms and of the classification and
/// regression losses in the total objective.
struct LossWeights {
  double lambda_dep = 0.5;
  double lambda_mat = 0.5;
  double lambda_cls = 1.0;
  double lambda_reg = 1.0;

  void validate() const;
  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

/// 0-based per-pixel targets at logit resolution.
struct CueTargets {
  std::vector<int> depth;     ///< 0..15
  std::vector<int> material;  ///< 0..3
};

/// (1/m) sum_i [ lambda_dep * sum_p CE_16(depth) + lambda_mat * sum_p CE_4(material) ].
ad::Tensor loss_reconstruction(ad::Tape& tape, std::span<const CueOutputs> outputs,
                               std::span<const CueTargets> targets, double lambda_dep,
                               double lambda_mat);

/// Mean binary cross-entropy of the cue scores against liveness labels.
ad::Tensor loss_classification(ad::Tape& tape, std::span<const ad::Tensor> scores,
                               std::span<const double> labels);

/// Mean over pairs of |R(F_i, F_i+1) - Δr_i|^2.
ad::Tensor loss_regression(ad::Tape& tape, std::span<const ad::Tensor> predictions,
                           std::span<const Residual> targets);

/// Per-video loss components; an undefined tensor counts as zero.
struct VideoLoss {
  ad::Tensor rec;
  ad::Tensor cls;
  ad::Tensor reg;
};

/// (1 / 2V) sum_v (L_rec + lambda_cls L_cls + lambda_reg L_reg).
ad::Tensor loss_total(ad::Tape& tape, std::span<const VideoLoss> videos, const LossWeights& w);

}  // namespace aurora
