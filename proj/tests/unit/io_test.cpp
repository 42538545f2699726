#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "aurora/config.hpp"
#include "aurora/dataset.hpp"
#include "aurora/video_file.hpp"
#include "test_support.hpp"

namespace aurora {
namespace {

using testing::small_videos;
using testing::TempDir;

std::vector<VideoRecord> sample_videos() {
  return small_videos(1, 16, 4, 5, CameraModel{0.03, 0, 1.5, 1.5});
}

void expect_same_content(const VideoRecord& a, const VideoRecord& b) {
  EXPECT_EQ(a.captcha, b.captcha);
  EXPECT_EQ(a.depth_labels, b.depth_labels);
  EXPECT_EQ(a.material_labels, b.material_labels);
  EXPECT_EQ(a.live, b.live);
  EXPECT_EQ(a.kind, b.kind);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    EXPECT_EQ(a.frames[i].pixels, b.frames[i].pixels);
    EXPECT_EQ(a.frames[i].fiducials, b.frames[i].fiducials);
  }
}

TEST(VideoFile, RoundTripsEveryKind) {
  for (const VideoRecord& v : sample_videos()) {
    const VideoRecord back = decode_video(encode_video(v));
    expect_same_content(v, back);
    // Replay frames were lit by the leaked recording, which the file does not keep.
    if (v.kind != SubjectKind::ModalityReplay) EXPECT_EQ(back, v);
  }
}

TEST(VideoFile, HeaderLayout) {
  const VideoRecord v = sample_videos().front();
  const std::string bytes = encode_video(v);
  EXPECT_EQ(bytes.substr(0, 4), "AGVD");
  auto u32 = [&](std::size_t off) {
    std::uint32_t x = 0;
    for (int i = 3; i >= 0; --i) x = (x << 8) | static_cast<unsigned char>(bytes[off + i]);
    return x;
  };
  EXPECT_EQ(u32(4), kVideoVersion);
  EXPECT_EQ(u32(8), 16u);
  EXPECT_EQ(u32(12), 16u);
  EXPECT_EQ(u32(16), 3u);
  EXPECT_EQ(u32(20), 4u);
}

TEST(VideoFile, RejectsCorruption) {
  const VideoRecord v = sample_videos().front();
  const std::string bytes = encode_video(v);
  std::string magic = bytes;
  magic[3] = 'X';
  EXPECT_THROW(decode_video(magic), IoError);
  std::string version = bytes;
  version[4] = 2;
  EXPECT_THROW(decode_video(version), IoError);
  for (std::size_t cut = 0; cut < bytes.size(); cut += 97) {
    EXPECT_THROW(decode_video(std::string_view(bytes).substr(0, cut)), IoError) << cut;
  }
  EXPECT_THROW(decode_video(std::string_view(bytes).substr(0, bytes.size() - 1)), IoError);
  EXPECT_THROW(decode_video(bytes + '\0'), IoError);
  // First depth label byte sits after the header, frames and captcha entries.
  const std::size_t depth_at = 24 + 4 * 3 * 16 * 16 * 4 + 4 * 5;
  std::string label = bytes;
  label[depth_at] = 0;
  EXPECT_THROW(decode_video(label), IoError);
  label[depth_at] = 17;
  EXPECT_THROW(decode_video(label), IoError);
}

TEST(VideoFile, SaveAndLoad) {
  TempDir dir("video");
  const VideoRecord v = sample_videos()[1];
  save_video(dir.file("a.agvd"), v);
  EXPECT_EQ(load_video(dir.file("a.agvd")), decode_video(encode_video(v)));
  EXPECT_THROW(load_video(dir.file("missing.agvd")), IoError);
}

TEST(Manifest, PlanIsDeterministicAndBalanced) {
  DatasetConfig cfg;
  cfg.train_per_kind = 3;
  cfg.val_per_kind = 2;
  cfg.test_per_kind = 1;
  const Manifest a = plan_dataset(cfg);
  EXPECT_EQ(a, plan_dataset(cfg));
  EXPECT_EQ(static_cast<int>(a.entries.size()), 4 * 6);
  EXPECT_EQ(a.split(Split::Train).size(), 12u);
  EXPECT_EQ(a.split(Split::Validation).size(), 8u);
  EXPECT_EQ(a.live_count(), 6);
  cfg.seed += 1;
  EXPECT_NE(plan_dataset(cfg).entries, a.entries);
}

TEST(Manifest, JsonRoundTrip) {
  DatasetConfig cfg;
  cfg.train_per_kind = 2;
  cfg.val_per_kind = cfg.test_per_kind = 1;
  const Manifest m = plan_dataset(cfg);
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);
  EXPECT_THROW(manifest_from_json("{not json"), IoError);
}

TEST(Dataset, WriteThenLoadSplit) {
  TempDir dir("dataset");
  DatasetConfig cfg;
  cfg.train_per_kind = 1;
  cfg.val_per_kind = 1;
  cfg.test_per_kind = 0;
  cfg.size = 16;
  cfg.frames = 3;
  const Manifest m = write_dataset(dir.str(), cfg);
  EXPECT_EQ(read_manifest(dir.str()), m);
  const auto val = load_split(dir.str(), m, Split::Validation);
  ASSERT_EQ(val.size(), 4u);
  const auto entries = m.split(Split::Validation);
  for (std::size_t i = 0; i < val.size(); ++i) {
    expect_same_content(val[i], synthesize_video(*entries[i], cfg));
  }
}

TEST(Config, DefaultsAndOverrides) {
  const AppConfig d = parse_config("");
  EXPECT_EQ(d.dataset, DatasetConfig{});
  EXPECT_EQ(d.train.epochs, TrainConfig{}.epochs);
  const AppConfig c = parse_config(
      "[dataset]\nsize = 16\nnoise_sigma = 0.02\nseed = 9\n"
      "[train]\nepochs = 3\nlambda_dep = 0\n"
      "[model]\nencoder_channels = 4, 8, 8, 8\n"
      "[ablate]\nlambda_dep = 0, 0.25, 0.5\nruns = 2\n");
  EXPECT_EQ(c.dataset.size, 16);
  EXPECT_EQ(c.dataset.camera.noise_sigma, 0.02);
  EXPECT_EQ(c.dataset.seed, 9u);
  EXPECT_EQ(c.train.epochs, 3);
  EXPECT_EQ(c.train.weights.lambda_dep, 0.0);
  EXPECT_EQ(c.train.model.input_size, 16);
  EXPECT_EQ(c.train.model.encoder_channels, (std::array<int, 4>{4, 8, 8, 8}));
  EXPECT_EQ(c.ablation.lambda_dep, (std::vector<double>{0, 0.25, 0.5}));
  EXPECT_EQ(c.ablation.runs, 2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("[dataset]\nsizee = 16\n"), ValidationError);
  EXPECT_THROW(parse_config("[extra]\na = 1\n"), ValidationError);
  EXPECT_THROW(parse_config("[train]\nepochs = many\n"), ValidationError);
  EXPECT_THROW(parse_config("[train]\nepochs = 0\n"), ValidationError);
  EXPECT_THROW(parse_config("[dataset]\nnoise_sigma = 0.2\n"), ValidationError);
  EXPECT_THROW(parse_config("[model]\nencoder_channels = 4, 8\n"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/aurora.ini"), IoError);
}

TEST(Config, SeedFromEnvironment) {
  ::unsetenv("AG_SEED");
  EXPECT_FALSE(seed_from_environment().has_value());
  ::setenv("AG_SEED", "12345", 1);
  EXPECT_EQ(seed_from_environment(), 12345u);
  ::setenv("AG_SEED", "-4", 1);
  EXPECT_THROW(seed_from_environment(), ValidationError);
  ::unsetenv("AG_SEED");
}

}  // namespace
}  // namespace aurora
