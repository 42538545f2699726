#include "aurora/captcha_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aurora/normalcue.hpp"

namespace aurora {

Residual encode_residual(const LightParams& from, const LightParams& to) {
  Residual r{};
  r[static_cast<std::size_t>(to.alpha)] += 1.0;
  r[static_cast<std::size_t>(from.alpha)] -= 1.0;
  r[4] = to.beta - from.beta;
  return r;
}

std::vector<Residual> encode_residuals(const LightCaptcha& captcha) {
  std::vector<Residual> out;
  for (std::size_t i = 0; i + 1 < captcha.sequence.size(); ++i) {
    out.push_back(encode_residual(captcha.sequence[i], captcha.sequence[i + 1]));
  }
  return out;
}

EstimatedCaptcha decode_captcha(std::span<const Residual> raw, const LightParams& anchor) {
  anchor.validate();
  const std::size_t m = raw.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto step_cost = [&](std::size_t i, int from, int to) {
    double c = 0.0;
    for (int k = 0; k < kLightTypes; ++k) {
      const double target = (k == to ? 1.0 : 0.0) - (k == from ? 1.0 : 0.0);
      const double e = raw[i][static_cast<std::size_t>(k)] - target;
      c += e * e;
    }
    return c;
  };

  std::array<double, kLightTypes> cost;
  cost.fill(kInf);
  cost[static_cast<std::size_t>(anchor.alpha)] = 0.0;
  std::vector<std::array<int, kLightTypes>> back(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::array<double, kLightTypes> next;
    next.fill(kInf);
    for (int to = 0; to < kLightTypes; ++to) {
      back[i][to] = -1;
      for (int from = 0; from < kLightTypes; ++from) {
        if (from == to || cost[from] == kInf) continue;
        const double c = cost[from] + step_cost(i, from, to);
        if (c < next[to]) {
          next[to] = c;
          back[i][to] = from;
        }
      }
    }
    cost = next;
  }

  std::vector<int> alphas(m + 1);
  alphas[m] = static_cast<int>(std::min_element(cost.begin(), cost.end()) - cost.begin());
  for (std::size_t i = m; i > 0; --i) alphas[i - 1] = back[i - 1][alphas[i]];

  EstimatedCaptcha est;
  est.sequence.push_back({anchor.alpha, anchor.beta});
  for (std::size_t i = 0; i < m; ++i) {
    const double delta = std::clamp(raw[i][4], -0.5, 0.5);
    est.sequence.push_back({alphas[i + 1], est.sequence.back().beta + delta});
    est.residuals.push_back(encode_residual(est.sequence[i], est.sequence[i + 1]));
  }
  return est;
}

double residual_snr_db(std::span<const Residual> ground, std::span<const Residual> estimated) {
  if (ground.size() != estimated.size()) {
    throw ValidationError("SNR needs sequences of equal length (" + std::to_string(ground.size()) +
                          " vs " + std::to_string(estimated.size()) + ")");
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    for (std::size_t k = 0; k < kResidualSize; ++k) {
      signal += ground[i][k] * ground[i][k];
      const double e = ground[i][k] - estimated[i][k];
      noise += e * e;
    }
  }
  if (!(signal > 0.0)) throw ValidationError("ground-truth residuals carry no energy");
  return std::min(10.0 * std::log10(signal / std::max(noise, kSnrNoiseFloor)), kSnrCapDb);
}

MatchResult calc_snr(const LightCaptcha& ground, const EstimatedCaptcha& estimated,
                     double tau_reg) {
  const std::vector<Residual> g = encode_residuals(ground);
  MatchResult r;
  r.tau_reg = tau_reg;
  r.snr_db = residual_snr_db(g, estimated.residuals);
  r.passed = r.snr_db > tau_reg;
  return r;
}

std::vector<ad::Tensor> regressor_inputs(const Video& frames) {
  std::vector<ad::Tensor> out;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    const AffineAlignment align = estimate_alignment(frames[i], frames[i + 1]);
    out.push_back(regressor_features(stack_frames(align_to(frames[i], align), frames[i + 1].pixels)));
  }
  return out;
}

std::vector<Residual> predict_residuals(const Model& model,
                                        std::span<const ad::Tensor> features) {
  std::vector<Residual> out;
  out.reserve(features.size());
  for (const ad::Tensor& f : features) {
    ad::Tape tape;
    const ad::Tensor r = regress_features(model, tape, f);
    Residual res{};
    std::copy(r.values().begin(), r.values().end(), res.begin());
    out.push_back(res);
  }
  return out;
}

MatchResult check_modality_attack(const Video& frames, const LightCaptcha& issued,
                                  const Model& model, double tau_reg) {
  if (frames.size() != issued.sequence.size()) {
    throw ValidationError("video length does not match the issued captcha");
  }
  const std::vector<ad::Tensor> features = regressor_inputs(frames);
  const std::vector<Residual> raw = predict_residuals(model, features);
  return calc_snr(issued, decode_captcha(raw, issued.sequence.front()), tau_reg);
}

}  // namespace aurora
