#include "aurora/photometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace aurora {
namespace {

// Red, green, blue and white screen lights.
const std::array<Eigen::Vector3d, kLightTypes> kLightColors{
    Eigen::Vector3d(0.50, 0.10, 0.10),
    Eigen::Vector3d(0.10, 0.50, 0.10),
    Eigen::Vector3d(0.10, 0.10, 0.50),
    Eigen::Vector3d(0.40, 0.40, 0.40),
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void LightParams::validate() const {
  if (alpha < 0 || alpha >= kLightTypes) throw ValidationError("light type must be in 0..3");
  if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("light intensity must be in (0, 1]");
}

void LightCaptcha::validate() const {
  if (sequence.size() < 2) throw ValidationError("light captcha needs at least 2 entries");
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    sequence[i].validate();
    if (i > 0 && sequence[i].alpha == sequence[i - 1].alpha) {
      throw ValidationError("consecutive captcha entries must use different light types");
    }
  }
}

LightCaptcha generate_captcha(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("captcha length must be at least 2, got " + std::to_string(n));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> first(0, kLightTypes - 1);
  std::uniform_int_distribution<int> step(1, kLightTypes - 1);
  std::uniform_real_distribution<double> intensity(0.5, 1.0);
  LightCaptcha c;
  c.seed = seed;
  c.sequence.reserve(n);
  int alpha = first(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) alpha = (alpha + step(rng)) % kLightTypes;
    // Stored at float precision so captchas survive serialization unchanged.
    c.sequence.push_back({alpha, static_cast<double>(static_cast<float>(intensity(rng)))});
  }
  return c;
}

Eigen::Vector3d light_color(int alpha) {
  if (alpha < 0 || alpha >= kLightTypes) throw ValidationError("light type must be in 0..3");
  return kLightColors[alpha];
}

Eigen::Vector3d diffuse_weight(const LightParams& lp) {
  lp.validate();
  return lp.beta * kLightColors[lp.alpha];
}

void CameraModel::validate() const {
  if (!(noise_sigma >= 0.0 && noise_sigma <= 0.05)) {
    throw ValidationError("camera noise_sigma must lie in [0, 0.05]");
  }
  if (quantize_bits != 0 && quantize_bits != 8) {
    throw ValidationError("camera quantize_bits must be 0 or 8");
  }
  if (!(max_shift_px >= 0.0 && max_shift_px <= 2.0)) {
    throw ValidationError("camera misalignment shift must lie in [0, 2] px");
  }
  if (!(max_rotation_deg >= 0.0 && max_rotation_deg <= 2.0)) {
    throw ValidationError("camera misalignment rotation must lie in [0, 2] degrees");
  }
}

Affine2 sample_misalignment(const CameraModel& cam, int height, int width,
                            std::uint64_t frame_seed) {
  if (cam.max_shift_px == 0.0 && cam.max_rotation_deg == 0.0) return identity_affine();
  std::mt19937_64 rng(mix_seed(frame_seed, 0xa11));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double angle = cam.max_rotation_deg * unit(rng);
  const double radius = cam.max_shift_px * std::sqrt(0.5 * (unit(rng) + 1.0));
  const double theta = 3.14159265358979323846 * unit(rng);
  const Eigen::Vector2d centre((width - 1) / 2.0, (height - 1) / 2.0);
  return rigid_affine(angle, centre,
                      Eigen::Vector2d(radius * std::cos(theta), radius * std::sin(theta)));
}

Image<double> lambertian_image(const Scene& scene, const LightParams& lp) {
  const Eigen::Vector3d k = diffuse_weight(lp);
  const int h = scene.height();
  const int w = scene.width();
  Image<double> img(3, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double shade = std::max(scene.light_direction.dot(scene.normals(y, x)), 0.0);
      const double rho = scene.albedo(y, x);
      for (int c = 0; c < 3; ++c) {
        img(c, y, x) = rho * (scene.ambient_weight + k[c] * shade);
      }
    }
  }
  return img;
}

ReflectionFrame render_frame(const Scene& scene, const LightParams& lp, const CameraModel& cam,
                             std::uint64_t frame_seed) {
  cam.validate();
  const Image<double> clean = lambertian_image(scene, lp);
  Image<float> pixels(3, clean.height(), clean.width());
  std::transform(clean.data().begin(), clean.data().end(), pixels.data().begin(),
                 [](double v) { return static_cast<float>(v); });

  ReflectionFrame frame;
  frame.light = lp;
  const Affine2 warp = sample_misalignment(cam, scene.height(), scene.width(), frame_seed);
  if (warp != identity_affine()) pixels = warp_image(pixels, warp);
  for (const auto& lm : scene.landmarks) {
    const Eigen::Vector2d q = apply(warp, lm);
    frame.fiducials.emplace_back(static_cast<float>(q.x()), static_cast<float>(q.y()));
  }

  std::mt19937_64 rng(mix_seed(frame_seed, 0xb0b));
  std::normal_distribution<double> noise(0.0, cam.noise_sigma > 0 ? cam.noise_sigma : 1.0);
  for (float& v : pixels.data()) {
    double value = v;
    if (cam.noise_sigma > 0.0) value += noise(rng);
    value = std::clamp(value, 0.0, 1.0);
    if (cam.quantize_bits == 8) value = std::round(value * 255.0) / 255.0;
    v = static_cast<float>(value);
  }
  frame.pixels = std::move(pixels);
  return frame;
}

Video render_video(const Scene& scene, const LightCaptcha& captcha, const CameraModel& cam,
                   std::uint64_t seed) {
  captcha.validate();
  Video frames;
  frames.reserve(captcha.sequence.size());
  for (std::size_t i = 0; i < captcha.sequence.size(); ++i) {
    frames.push_back(render_frame(scene, captcha.sequence[i], cam, mix_seed(seed, i)));
  }
  return frames;
}

Video render_modality_replay(const LightCaptcha& original, const Scene& scene,
                             const LightCaptcha& fresh, const CameraModel& cam,
                             std::uint64_t seed) {
  fresh.validate();
  if (fresh.size() != original.size()) {
    throw ValidationError("replayed recording and issued captcha differ in length");
  }
  // Worst case for the defender: the screen light of the fresh session is
  // blocked, so the captured frames are exactly the leaked recording.
  return render_video(scene, original, cam, seed);
}

}  // namespace aurora
