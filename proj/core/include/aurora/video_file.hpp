#pragma once

#include <string>
#include <string_view>

#include "aurora/image.hpp"
#include "aurora/photometry.hpp"
#include "aurora/scene.hpp"

namespace aurora {

inline constexpr std::string_view kVideoMagic = "AGVD";
inline constexpr std::uint32_t kVideoVersion = 1;

/// A captured video with the captcha issued for it and its ground truth.
struct VideoRecord {
  Video frames;
  LightCaptcha captcha;  ///< the issued challenge
  LabelMap depth_labels;     ///< 1..16
  LabelMap material_labels;  ///< 1..4
  bool live = false;
  SubjectKind kind = SubjectKind::Live;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

/// "AGVD", u32 version, u32 H, W, C, n; n frames of C x H x W f32; n captcha
/// entries (u8 alpha, f32 beta); H x W u8 depth labels; H x W u8 material
/// labels; u8 liveness. Then a trailer: u8 kind, u32 captcha seed low and
/// high words, u32 fiducial count K, n x K x 2 f32 fiducial coordinates.
/// Each frame's light is the captcha entry of the same index.
std::string encode_video(const VideoRecord& video);
/// Throws IoError on bad magic or version, truncation, trailing bytes or
/// labels out of range.
VideoRecord decode_video(std::string_view bytes);

void save_video(const std::string& path, const VideoRecord& video);
VideoRecord load_video(const std::string& path);

}  // namespace aurora
