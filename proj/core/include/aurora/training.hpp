#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aurora/losses.hpp"
#include "aurora/metrics.hpp"
#include "aurora/model.hpp"
#include "aurora/pipeline.hpp"
#include "aurora/video_file.hpp"

namespace aurora {

struct TrainConfig {
  int epochs = 40;
  int batch_size = 8;  ///< videos per optimizer step
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  LossWeights weights;
  ModelConfig model;
  double tau_reg = kDefaultTauReg;

  void validate() const;
};

/// A video turned into network inputs and supervision targets.
struct TrainingSample {
  SubjectKind kind = SubjectKind::Live;
  bool live = false;
  LightCaptcha captcha;
  PreparedVideo inputs;
  CueTargets targets;             ///< one map pair shared by all cues of the video
  std::vector<Residual> residuals;  ///< ground-truth light residuals
  /// Replays carry live reflections lit by a different captcha, so they only
  /// supervise depth and material.
  bool supervise_cls_reg = true;
};

TrainingSample prepare_sample(const VideoRecord& video, const ModelConfig& model);
std::vector<TrainingSample> prepare_samples(std::span<const VideoRecord> videos,
                                            const ModelConfig& model);

/// Total objective of a minibatch plus the summed per-video component values.
struct BatchLoss {
  ad::Tensor total;
  double rec = 0.0;
  double cls = 0.0;
  double reg = 0.0;
};

/// Decoders are skipped when both reconstruction weights are zero.
BatchLoss batch_loss(const Model& model, ad::Tape& tape, std::span<const TrainingSample> batch,
                     const LossWeights& w);

struct EpochLog {
  int epoch = 0;
  double rec = 0.0;
  double cls = 0.0;
  double reg = 0.0;
  double total = 0.0;
  double val_eer = 0.0;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
};

/// Scores every prepared video with the model.
std::vector<ScoredVideo> score_videos(const Model& model, std::span<const TrainingSample> videos);

/// Epoch-wise RMSprop on the total loss, minibatches of `batch_size` videos in
/// a seeded shuffle. After the last epoch the weights are rounded to float and
/// tau_cls is set at the validation EER. Throws TrainingError on a non-finite
/// loss. `on_epoch` is called after every epoch.
TrainResult train(const TrainConfig& config, std::span<const TrainingSample> train_set,
                  std::span<const TrainingSample> validation,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace aurora
