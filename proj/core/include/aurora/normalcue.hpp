#pragma once

#include <vector>

#include "aurora/geometry.hpp"
#include "aurora/image.hpp"
#include "aurora/photometry.hpp"

namespace aurora {

/// Upper clamp applied to cue magnitudes.
inline constexpr double kCueClamp = 1.5;
/// Channels whose diffuse-weight difference is at most this are ignored.
inline constexpr double kDiffuseEpsilon = 1e-3;

/// rho * cos(theta) per pixel, recovered from a pair of reflection frames.
struct NormalCue {
  ScalarMap values;
  int pair_index = 0;  ///< cue i comes from frames i and i+1
};

/// Affine map from frame a's pixel grid onto frame b's.
struct AffineAlignment {
  Affine2 matrix = identity_affine();
  double residual = 0.0;  ///< mean fiducial error after the fit, px
};

/// Least-squares affine fit mapping frame_a's fiducials onto frame_b's.
/// Throws AlignmentError with fewer than 3 fiducials or a degenerate layout.
AffineAlignment estimate_alignment(const ReflectionFrame& frame_a, const ReflectionFrame& frame_b);

/// frame_a resampled onto frame_b's pixel grid.
Image<float> align_to(const ReflectionFrame& frame_a, const AffineAlignment& align);

/// Normal cue of an aligned frame pair: frame_a is warped onto frame_b, then
/// (F_a - F_b) / (k_a - k_b) is solved per pixel in least squares over the
/// channels whose weight difference exceeds kDiffuseEpsilon. The magnitude is
/// clamped to [0, kCueClamp]. Throws DegeneratePairError when no channel
/// qualifies.
NormalCue extract_normal_cue(const ReflectionFrame& frame_a, const ReflectionFrame& frame_b,
                             const LightParams& light_a, const LightParams& light_b,
                             const AffineAlignment& align);

/// One cue per contiguous frame pair, lit per `captcha` (the issued lights).
std::vector<NormalCue> build_cue_sequence(const Video& frames, const LightCaptcha& captcha);

/// Network input: cue divided by three times its spatial mean, clamped to
/// [0, 1]. A global rescaling of the cue leaves the input unchanged.
ScalarMap cue_network_input(const NormalCue& cue);

}  // namespace aurora
