#include "aurora/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aurora/optim.hpp"

namespace aurora {
namespace {

std::vector<int> to_targets(const LabelMap& labels, int factor) {
  const LabelMap small = downsample_labels(labels, factor);
  std::vector<int> out(small.data().begin(), small.data().end());
  for (int& v : out) v -= 1;
  return out;
}

}  // namespace

BatchLoss batch_loss(const Model& model, ad::Tape& tape, std::span<const TrainingSample> batch,
                     const LossWeights& w) {
  const bool decoders = w.lambda_dep > 0.0 || w.lambda_mat > 0.0;
  std::vector<VideoLoss> parts;
  BatchLoss out;
  for (const TrainingSample& s : batch) {
    VideoLoss vl;
    std::vector<CueOutputs> outputs;
    std::vector<ad::Tensor> scores;
    for (const ScalarMap& input : s.inputs.cue_inputs) {
      if (decoders) {
        outputs.push_back(forward(model, tape, input));
        scores.push_back(outputs.back().cls_score);
      } else if (s.supervise_cls_reg) {
        scores.push_back(forward_classifier(model, tape, input));
      }
    }
    if (decoders) {
      const std::vector<CueTargets> targets(outputs.size(), s.targets);
      vl.rec = loss_reconstruction(tape, outputs, targets, w.lambda_dep, w.lambda_mat);
      out.rec += vl.rec.item();
    }
    if (s.supervise_cls_reg) {
      const std::vector<double> labels(scores.size(), s.live ? 1.0 : 0.0);
      vl.cls = loss_classification(tape, scores, labels);
      out.cls += vl.cls.item();
      std::vector<ad::Tensor> predictions;
      for (const ad::Tensor& f : s.inputs.pair_features) {
        predictions.push_back(regress_features(model, tape, f));
      }
      vl.reg = loss_regression(tape, predictions, s.residuals);
      out.reg += vl.reg.item();
    }
    parts.push_back(std::move(vl));
  }
  out.total = loss_total(tape, parts, w);
  return out;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (batch_size < 1) throw ValidationError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  weights.validate();
  model.validate();
}

TrainingSample prepare_sample(const VideoRecord& video, const ModelConfig& model) {
  if (video.frames.empty() || video.frames.front().pixels.height() != model.input_size ||
      video.frames.front().pixels.width() != model.input_size) {
    throw ValidationError("video resolution does not match the model input size");
  }
  TrainingSample s;
  s.kind = video.kind;
  s.live = video.live;
  s.captcha = video.captcha;
  s.inputs = prepare_video(video.frames, video.captcha);
  const int factor = model.input_size / model.logit_size();
  s.targets.depth = to_targets(video.depth_labels, factor);
  s.targets.material = to_targets(video.material_labels, factor);
  s.residuals = encode_residuals(video.captcha);
  s.supervise_cls_reg = video.kind != SubjectKind::ModalityReplay;
  return s;
}

std::vector<TrainingSample> prepare_samples(std::span<const VideoRecord> videos,
                                            const ModelConfig& model) {
  std::vector<TrainingSample> out;
  out.reserve(videos.size());
  for (const VideoRecord& v : videos) out.push_back(prepare_sample(v, model));
  return out;
}

std::vector<ScoredVideo> score_videos(const Model& model, std::span<const TrainingSample> videos) {
  std::vector<ScoredVideo> out;
  out.reserve(videos.size());
  for (const TrainingSample& s : videos) {
    const VideoInference inf = infer_video(model, s.inputs, s.captcha);
    out.push_back({inf.cue_scores, inf.snr_db, s.live, s.kind});
  }
  return out;
}

TrainResult train(const TrainConfig& config, std::span<const TrainingSample> train_set,
                  std::span<const TrainingSample> validation,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  config.validate();
  if (train_set.empty()) throw ValidationError("training set is empty");

  TrainResult result{Model(config.model, config.seed), {}};
  Model& model = result.model;
  ad::OptimizerState opt;
  opt.learning_rate = config.learning_rate;
  std::mt19937_64 rng(mix_seed(config.seed, 0x5eed));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<TrainingSample> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochLog log;
    log.epoch = epoch;
    int batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);

      ad::Tape tape;
      const BatchLoss loss = batch_loss(model, tape, batch, config.weights);
      const double total = loss.total.item();
      if (!std::isfinite(total)) {
        throw TrainingError("loss diverged at epoch " + std::to_string(epoch), epoch);
      }
      for (ad::Tensor& p : model.parameters()) p.zero_grad();
      if (loss.total.requires_grad()) {
        tape.backward(loss.total);
        ad::rmsprop_step(model.parameters(), opt);
      }
      const double n = static_cast<double>(batch.size());
      log.rec += loss.rec / n;
      log.cls += loss.cls / n;
      log.reg += loss.reg / n;
      log.total += total;
      ++batches;
    }
    log.rec /= batches;
    log.cls /= batches;
    log.reg /= batches;
    log.total /= batches;
    if (!validation.empty()) {
      const std::vector<ScoredVideo> scored = score_videos(model, validation);
      std::vector<double> scores;
      std::vector<bool> live;
      for (const ScoredVideo& v : scored) {
        scores.push_back(effective_score(v, config.tau_reg));
        live.push_back(v.live);
      }
      const EerResult eer = find_eer(scores, live);
      log.val_eer = eer.eer;
    }
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);
  }

  model.round_to_float();
  if (!validation.empty()) {
    const std::vector<ScoredVideo> scored = score_videos(model, validation);
    std::vector<double> scores;
    std::vector<bool> live;
    for (const ScoredVideo& v : scored) {
      scores.push_back(effective_score(v, config.tau_reg));
      live.push_back(v.live);
    }
    const EerResult eer = find_eer(scores, live);
    model.set_tau_cls(eer.tau);
    result.log.back().val_eer = eer.eer;
  }
  return result;
}

}  // namespace aurora
