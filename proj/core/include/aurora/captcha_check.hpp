#pragma once

#include <array>
#include <span>
#include <vector>

#include "aurora/model.hpp"
#include "aurora/photometry.hpp"

namespace aurora {

/// Light parameter residual between two consecutive frames:
/// one-hot(alpha_next) - one-hot(alpha_prev), then beta_next - beta_prev.
using Residual = std::array<double, kResidualSize>;

inline constexpr double kSnrCapDb = 120.0;
inline constexpr double kSnrNoiseFloor = 1e-12;
inline constexpr double kDefaultTauReg = 20.0;

Residual encode_residual(const LightParams& from, const LightParams& to);
/// m = n - 1 residuals of an n-entry captcha.
std::vector<Residual> encode_residuals(const LightCaptcha& captcha);

/// Light sequence recovered from regressor outputs.
struct EstimatedCaptcha {
  std::vector<Residual> residuals;     ///< decoded residual per frame pair
  std::vector<LightParams> sequence;   ///< reconstructed lights, anchor first
};

/// Decodes raw regressor outputs. Light types follow the most likely path
/// (Viterbi, squared error, no repeated type) starting from the anchor's type;
/// intensity residuals are clamped to [-0.5, 0.5] and accumulated from the
/// anchor's intensity.
EstimatedCaptcha decode_captcha(std::span<const Residual> raw, const LightParams& anchor);

struct MatchResult {
  double snr_db = 0.0;
  bool passed = false;
  double tau_reg = kDefaultTauReg;
};

/// 10 log10(sum |g|^2 / max(sum |g - e|^2, 1e-12)), capped at 120 dB.
/// Throws ValidationError on a length mismatch or zero ground energy.
double residual_snr_db(std::span<const Residual> ground, std::span<const Residual> estimated);

MatchResult calc_snr(const LightCaptcha& ground, const EstimatedCaptcha& estimated,
                     double tau_reg = kDefaultTauReg);

/// Regressor features of every contiguous pair, frame i aligned onto i+1.
std::vector<ad::Tensor> regressor_inputs(const Video& frames);

/// Regressor outputs for precomputed pair features.
std::vector<Residual> predict_residuals(const Model& model,
                                        std::span<const ad::Tensor> features);

/// Runs the light regressor over an incoming video and matches the decoded
/// captcha against the issued one. A replayed recording lit by a different
/// captcha is expected to fail.
MatchResult check_modality_attack(const Video& frames, const LightCaptcha& issued,
                                  const Model& model, double tau_reg = kDefaultTauReg);

}  // namespace aurora
