#include "aurora/pipeline.hpp"

#include <algorithm>
#include <string>

namespace aurora {

PreparedVideo prepare_video(const Video& frames, const LightCaptcha& issued) {
  PreparedVideo out;
  for (const NormalCue& cue : build_cue_sequence(frames, issued)) {
    out.cue_inputs.push_back(cue_network_input(cue));
  }
  out.pair_features = regressor_inputs(frames);
  return out;
}

VideoInference infer_video(const Model& model, const PreparedVideo& video,
                           const LightCaptcha& issued) {
  if (video.pairs() + 1 != issued.size()) {
    throw ValidationError("prepared video does not match the issued captcha length");
  }
  VideoInference out;
  for (const ScalarMap& input : video.cue_inputs) {
    ad::Tape tape;
    out.cue_scores.push_back(forward_classifier(model, tape, input).item());
  }
  const std::vector<Residual> raw = predict_residuals(model, video.pair_features);
  out.snr_db = calc_snr(issued, decode_captcha(raw, issued.sequence.front())).snr_db;
  return out;
}

Verdict decide(std::span<const double> cue_scores, double snr_db, double tau_cls,
               double tau_reg) {
  Verdict v;
  v.cue_scores.assign(cue_scores.begin(), cue_scores.end());
  v.m = static_cast<int>(cue_scores.size());
  v.consensus_count = static_cast<int>(
      std::count_if(cue_scores.begin(), cue_scores.end(), [&](double s) { return s > tau_cls; }));
  v.snr_db = snr_db;
  v.tau_cls = tau_cls;
  v.tau_reg = tau_reg;
  v.live = 2 * v.consensus_count > v.m && snr_db > tau_reg;
  return v;
}

Verdict verify_video(const Video& frames, const LightCaptcha& issued, const Model& model,
                     double tau_cls, double tau_reg) {
  if (frames.size() < 3) {
    throw ValidationError("verification needs at least 3 frames, got " +
                          std::to_string(frames.size()));
  }
  issued.validate();
  const VideoInference inf = infer_video(model, prepare_video(frames, issued), issued);
  return decide(inf.cue_scores, inf.snr_db, tau_cls, tau_reg);
}

}  // namespace aurora
