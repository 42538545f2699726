#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "aurora/geometry.hpp"
#include "aurora/image.hpp"
#include "aurora/scene.hpp"

namespace aurora {

inline constexpr int kLightTypes = 4;

/// One entry of a light CAPTCHA: discrete hue type and intensity.
struct LightParams {
  int alpha = 0;     ///< light type, 0..3
  double beta = 1.0; ///< intensity, (0, 1]

  void validate() const;
  friend bool operator==(const LightParams&, const LightParams&) = default;
};

/// A random light sequence cast by the screen, one entry per frame.
struct LightCaptcha {
  std::vector<LightParams> sequence;
  std::uint64_t seed = 0;

  int size() const noexcept { return static_cast<int>(sequence.size()); }
  /// At least two entries, every entry valid, consecutive hues distinct.
  void validate() const;
  friend bool operator==(const LightCaptcha&, const LightCaptcha&) = default;
};

/// Uniformly random hue sequence with no two consecutive hues equal;
/// intensities uniform in [0.5, 1]. Deterministic per seed.
LightCaptcha generate_captcha(int n, std::uint64_t seed);

/// Fixed RGB colour of a light type (every channel in [0.1, 0.5]).
Eigen::Vector3d light_color(int alpha);

/// Per-channel diffuse weight k_r = beta * color(alpha).
Eigen::Vector3d diffuse_weight(const LightParams& lp);

/// Capture imperfections. Misalignment is drawn per frame inside the bounds.
struct CameraModel {
  double noise_sigma = 0.0;      ///< additive Gaussian, [0, 0.05]
  int quantize_bits = 0;         ///< 0 (off) or 8
  double max_shift_px = 0.0;     ///< translation radius, [0, 2]
  double max_rotation_deg = 0.0; ///< [0, 2]

  void validate() const;
  bool ideal() const noexcept {
    return noise_sigma == 0.0 && quantize_bits == 0 && max_shift_px == 0.0 &&
           max_rotation_deg == 0.0;
  }
  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

/// A captured RGB frame plus the metadata carried with synthetic captures.
struct ReflectionFrame {
  Image<float> pixels;                     ///< 3 x H x W, values in [0, 1]
  LightParams light;                       ///< light the pixels were lit by
  std::vector<Eigen::Vector2d> fiducials;  ///< planted landmarks in this frame

  friend bool operator==(const ReflectionFrame&, const ReflectionFrame&) = default;
};

using Video = std::vector<ReflectionFrame>;

/// Misalignment for one frame, drawn from the camera bounds.
Affine2 sample_misalignment(const CameraModel& cam, int height, int width,
                            std::uint64_t frame_seed);

/// Lambertian image F = rho * (k_a + k_r[c] * max(l.n, 0)) before any camera
/// effect; no clamping.
Image<double> lambertian_image(const Scene& scene, const LightParams& lp);

/// Renders one frame: Lambertian image, misalignment warp, noise, clamp to
/// [0, 1], optional 8-bit quantization.
ReflectionFrame render_frame(const Scene& scene, const LightParams& lp, const CameraModel& cam,
                             std::uint64_t frame_seed);

/// One frame per captcha entry, frame i lit by captcha.sequence[i].
Video render_video(const Scene& scene, const LightCaptcha& captcha, const CameraModel& cam,
                   std::uint64_t seed);

/// A leaked recording lit by `original` replayed during a session that issued
/// `fresh`. The fresh light does not interfere with the replayed frames.
Video render_modality_replay(const LightCaptcha& original, const Scene& scene,
                             const LightCaptcha& fresh, const CameraModel& cam,
                             std::uint64_t seed);

/// SplitMix64 step, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace aurora
