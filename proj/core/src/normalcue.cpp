#include "aurora/normalcue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/QR>

namespace aurora {

AffineAlignment estimate_alignment(const ReflectionFrame& frame_a, const ReflectionFrame& frame_b) {
  if (!frame_a.pixels.same_shape(frame_b.pixels)) {
    throw ValidationError("frames to align must have identical dimensions");
  }
  const auto& src = frame_a.fiducials;
  const auto& dst = frame_b.fiducials;
  if (src.size() != dst.size()) throw AlignmentError("frames carry different fiducial counts");
  if (src.size() < 3) throw AlignmentError("affine alignment needs at least 3 fiducials");

  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd target(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.row(i) << src[i].x(), src[i].y(), 1.0;
    target.row(i) << dst[i].x(), dst[i].y();
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw AlignmentError("fiducials are collinear");
  const Eigen::MatrixXd solution = qr.solve(target);  // 3 x 2

  AffineAlignment out;
  out.matrix = solution.transpose();
  if (!(std::abs(determinant(out.matrix)) > 1e-9)) throw AlignmentError("singular alignment");
  double err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) err += (apply(out.matrix, src[i]) - dst[i]).norm();
  out.residual = err / static_cast<double>(n);
  return out;
}

Image<float> align_to(const ReflectionFrame& frame_a, const AffineAlignment& align) {
  const bool identity = (align.matrix - identity_affine()).cwiseAbs().maxCoeff() < 1e-9;
  return identity ? frame_a.pixels : warp_image(frame_a.pixels, align.matrix);
}

NormalCue extract_normal_cue(const ReflectionFrame& frame_a, const ReflectionFrame& frame_b,
                             const LightParams& light_a, const LightParams& light_b,
                             const AffineAlignment& align) {
  if (!frame_a.pixels.same_shape(frame_b.pixels) || frame_a.pixels.channels() != 3) {
    throw ValidationError("cue extraction needs two RGB frames of equal size");
  }
  const Eigen::Vector3d d = diffuse_weight(light_a) - diffuse_weight(light_b);
  std::array<bool, 3> valid{};
  double denom = 0.0;
  for (int c = 0; c < 3; ++c) {
    valid[c] = std::abs(d[c]) > kDiffuseEpsilon;
    if (valid[c]) denom += d[c] * d[c];
  }
  if (denom == 0.0) {
    throw DegeneratePairError("light pair too similar to separate reflection from ambient");
  }

  const Image<float> warped = align_to(frame_a, align);
  const Image<float>& fb = frame_b.pixels;
  const int h = fb.height();
  const int w = fb.width();
  NormalCue cue;
  cue.values = ScalarMap(1, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double num = 0.0;
      for (int c = 0; c < 3; ++c) {
        if (valid[c]) {
          num += d[c] * (static_cast<double>(warped(c, y, x)) - static_cast<double>(fb(c, y, x)));
        }
      }
      cue.values(y, x) = std::min(std::abs(num / denom), kCueClamp);
    }
  }
  return cue;
}

std::vector<NormalCue> build_cue_sequence(const Video& frames, const LightCaptcha& captcha) {
  if (frames.size() != captcha.sequence.size()) {
    throw ValidationError("video has " + std::to_string(frames.size()) + " frames but captcha has " +
                          std::to_string(captcha.sequence.size()) + " entries");
  }
  if (frames.size() < 2) throw ValidationError("need at least 2 frames for a cue");
  std::vector<NormalCue> cues;
  cues.reserve(frames.size() - 1);
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    const AffineAlignment align = estimate_alignment(frames[i], frames[i + 1]);
    NormalCue cue = extract_normal_cue(frames[i], frames[i + 1], captcha.sequence[i],
                                       captcha.sequence[i + 1], align);
    cue.pair_index = static_cast<int>(i);
    cues.push_back(std::move(cue));
  }
  return cues;
}

ScalarMap cue_network_input(const NormalCue& cue) {
  double mean = 0.0;
  for (double v : cue.values.data()) mean += v;
  mean /= static_cast<double>(cue.values.size());
  ScalarMap out(1, cue.values.height(), cue.values.width());
  if (!(mean > 1e-9)) return out;
  const double scale = 1.0 / (3.0 * mean);
  std::transform(cue.values.data().begin(), cue.values.data().end(), out.data().begin(),
                 [scale](double v) { return std::clamp(v * scale, 0.0, 1.0); });
  return out;
}

}  // namespace aurora
