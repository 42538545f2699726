#include "aurora/video_file.hpp"

#include "aurora/binary_io.hpp"

namespace aurora {

std::string encode_video(const VideoRecord& v) {
  const std::size_t n = v.frames.size();
  if (n == 0 || v.captcha.sequence.size() != n) {
    throw ValidationError("video needs one captcha entry per frame");
  }
  const Image<float>& first = v.frames.front().pixels;
  const std::size_t fiducials = v.frames.front().fiducials.size();
  ByteWriter w;
  w.bytes(kVideoMagic);
  w.u32(kVideoVersion);
  w.u32(static_cast<std::uint32_t>(first.height()));
  w.u32(static_cast<std::uint32_t>(first.width()));
  w.u32(static_cast<std::uint32_t>(first.channels()));
  w.u32(static_cast<std::uint32_t>(n));
  for (const ReflectionFrame& f : v.frames) {
    if (!f.pixels.same_shape(first) || f.fiducials.size() != fiducials) {
      throw ValidationError("all frames of a video must share shape and fiducial count");
    }
    for (float p : f.pixels.data()) w.f32(p);
  }
  for (const LightParams& lp : v.captcha.sequence) {
    w.u8(static_cast<std::uint8_t>(lp.alpha));
    w.f32(static_cast<float>(lp.beta));
  }
  for (const LabelMap* map : {&v.depth_labels, &v.material_labels}) {
    if (map->channels() != 1 || map->height() != first.height() ||
        map->width() != first.width()) {
      throw ValidationError("label maps must match the frame size");
    }
    for (std::uint8_t l : map->data()) w.u8(l);
  }
  w.u8(v.live ? 1 : 0);

  w.u8(static_cast<std::uint8_t>(v.kind));
  w.u32(static_cast<std::uint32_t>(v.captcha.seed & 0xffffffffu));
  w.u32(static_cast<std::uint32_t>(v.captcha.seed >> 32));
  w.u32(static_cast<std::uint32_t>(fiducials));
  for (const ReflectionFrame& f : v.frames) {
    for (const auto& p : f.fiducials) {
      w.f32(static_cast<float>(p.x()));
      w.f32(static_cast<float>(p.y()));
    }
  }
  return w.buffer();
}

VideoRecord decode_video(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != kVideoMagic) throw IoError("not a video file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kVideoVersion) {
    throw IoError("unsupported video file version " + std::to_string(version));
  }
  const std::uint32_t h = r.u32(), w = r.u32(), c = r.u32(), n = r.u32();
  if (h == 0 || w == 0 || c == 0 || n == 0 || h > 4096 || w > 4096 || c > 16) {
    throw IoError("video header has implausible dimensions");
  }
  const std::size_t frame_bytes = std::size_t{4} * h * w * c;
  if (r.remaining() / frame_bytes < n) throw IoError("unexpected end of data (truncated file)");

  VideoRecord v;
  v.frames.resize(n);
  for (ReflectionFrame& f : v.frames) {
    f.pixels = Image<float>(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
    for (float& p : f.pixels.data()) p = r.f32();
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    LightParams lp;
    lp.alpha = r.u8();
    lp.beta = r.f32();
    if (lp.alpha >= kLightTypes || !(lp.beta > 0.0 && lp.beta <= 1.0)) {
      throw IoError("captcha entry out of range");
    }
    v.captcha.sequence.push_back(lp);
    v.frames[i].light = lp;
  }
  auto read_labels = [&](int max_label) {
    LabelMap map(1, static_cast<int>(h), static_cast<int>(w));
    for (std::uint8_t& l : map.data()) {
      l = r.u8();
      if (l < 1 || l > max_label) throw IoError("label out of range");
    }
    return map;
  };
  v.depth_labels = read_labels(kDepthBins);
  v.material_labels = read_labels(kMaterialClasses);
  const std::uint8_t live = r.u8();
  if (live > 1) throw IoError("liveness flag out of range");
  v.live = live == 1;

  const std::uint8_t kind = r.u8();
  if (kind >= kSubjectKinds) throw IoError("subject kind out of range");
  v.kind = static_cast<SubjectKind>(kind);
  const std::uint64_t lo = r.u32();
  const std::uint64_t hi = r.u32();
  v.captcha.seed = lo | (hi << 32);
  const std::uint32_t k = r.u32();
  if (r.remaining() != std::size_t{8} * k * n) {
    throw IoError(r.remaining() < std::size_t{8} * k * n ? "unexpected end of data (truncated file)"
                                                          : "trailing bytes after video data");
  }
  for (ReflectionFrame& f : v.frames) {
    for (std::uint32_t i = 0; i < k; ++i) {
      const double x = r.f32();
      const double y = r.f32();
      f.fiducials.emplace_back(x, y);
    }
  }
  return v;
}

void save_video(const std::string& path, const VideoRecord& video) {
  write_file(path, encode_video(video));
}

VideoRecord load_video(const std::string& path) { return decode_video(read_file(path)); }

}  // namespace aurora
