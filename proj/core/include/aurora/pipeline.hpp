#pragma once

#include <span>
#include <vector>

#include "aurora/captcha_check.hpp"
#include "aurora/model.hpp"
#include "aurora/photometry.hpp"

namespace aurora {

/// Network inputs of one incoming video: a cue map per contiguous pair and
/// the regressor features of the aligned pair.
struct PreparedVideo {
  std::vector<ScalarMap> cue_inputs;
  std::vector<ad::Tensor> pair_features;

  int pairs() const noexcept { return static_cast<int>(cue_inputs.size()); }
};

/// Aligns, extracts the m normal cues under the issued lights and computes
/// the regressor features. Throws DegeneratePairError for an unusable pair.
PreparedVideo prepare_video(const Video& frames, const LightCaptcha& issued);

/// Classifier scores and SNR of one prepared video, independent of thresholds.
struct VideoInference {
  std::vector<double> cue_scores;
  double snr_db = 0.0;
};

VideoInference infer_video(const Model& model, const PreparedVideo& video,
                           const LightCaptcha& issued);

struct Verdict {
  bool live = false;
  std::vector<double> cue_scores;
  int consensus_count = 0;  ///< scores strictly above tau_cls
  int m = 0;
  double snr_db = 0.0;
  double tau_cls = 0.5;
  double tau_reg = kDefaultTauReg;
};

/// live iff more than half of the cue scores exceed tau_cls and the SNR
/// exceeds tau_reg.
Verdict decide(std::span<const double> cue_scores, double snr_db, double tau_cls, double tau_reg);

/// The video-wise pipeline. Needs at least three frames.
Verdict verify_video(const Video& frames, const LightCaptcha& issued, const Model& model,
                     double tau_cls, double tau_reg = kDefaultTauReg);

}  // namespace aurora
