#include "aurora/losses.hpp"

namespace aurora {
namespace {

ad::Tensor accumulate(ad::Tape& tape, const ad::Tensor& total, const ad::Tensor& term,
                      double weight) {
  if (!term.defined() || weight == 0.0) return total;
  const ad::Tensor scaled = weight == 1.0 ? term : ad::scale(tape, term, weight);
  return total.defined() ? ad::add(tape, total, scaled) : scaled;
}

ad::Tensor zero_if_undefined(const ad::Tensor& t) {
  return t.defined() ? t : ad::Tensor::zeros({1});
}

}  // namespace

void LossWeights::validate() const {
  if (!(lambda_dep >= 0.0 && lambda_mat >= 0.0 && lambda_cls >= 0.0 && lambda_reg >= 0.0)) {
    throw ValidationError("loss weights must be non-negative");
  }
}

ad::Tensor loss_reconstruction(ad::Tape& tape, std::span<const CueOutputs> outputs,
                               std::span<const CueTargets> targets, double lambda_dep,
                               double lambda_mat) {
  if (outputs.size() != targets.size() || outputs.empty()) {
    throw ValidationError("reconstruction loss needs one target per cue");
  }
  ad::Tensor total;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (lambda_dep != 0.0) {
      total = accumulate(tape, total,
                         ad::softmax_cross_entropy(tape, outputs[i].depth_logits, targets[i].depth),
                         lambda_dep);
    }
    if (lambda_mat != 0.0) {
      total = accumulate(
          tape, total,
          ad::softmax_cross_entropy(tape, outputs[i].material_logits, targets[i].material),
          lambda_mat);
    }
  }
  if (!total.defined()) return ad::Tensor::zeros({1});
  return ad::scale(tape, total, 1.0 / static_cast<double>(outputs.size()));
}

ad::Tensor loss_classification(ad::Tape& tape, std::span<const ad::Tensor> scores,
                               std::span<const double> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw ValidationError("classification loss needs one label per cue");
  }
  ad::Tensor total;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total = accumulate(tape, total, ad::binary_cross_entropy(tape, scores[i], labels[i]), 1.0);
  }
  return ad::scale(tape, total, 1.0 / static_cast<double>(scores.size()));
}

ad::Tensor loss_regression(ad::Tape& tape, std::span<const ad::Tensor> predictions,
                           std::span<const Residual> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ValidationError("regression loss: " + std::to_string(predictions.size()) +
                          " predictions for " + std::to_string(targets.size()) + " residuals");
  }
  ad::Tensor total;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total = accumulate(tape, total, ad::squared_error(tape, predictions[i], targets[i]), 1.0);
  }
  return ad::scale(tape, total, 1.0 / static_cast<double>(predictions.size()));
}

ad::Tensor loss_total(ad::Tape& tape, std::span<const VideoLoss> videos, const LossWeights& w) {
  w.validate();
  if (videos.empty()) throw ValidationError("total loss over zero videos");
  ad::Tensor total;
  for (const VideoLoss& v : videos) {
    total = accumulate(tape, total, v.rec, 1.0);
    total = accumulate(tape, total, v.cls, w.lambda_cls);
    total = accumulate(tape, total, v.reg, w.lambda_reg);
  }
  return ad::scale(tape, zero_if_undefined(total), 1.0 / (2.0 * static_cast<double>(videos.size())));
}

}  // namespace aurora
