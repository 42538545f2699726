#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aurora/photometry.hpp"
#include "aurora/scene.hpp"
#include "aurora/video_file.hpp"

namespace aurora {

enum class Split : std::uint8_t { Train = 0, Validation = 1, Test = 2 };

std::string_view to_string(Split s);
Split split_from_string(std::string_view name);

/// Size and capture conditions of a synthetic dataset. Counts are per
/// subject kind, so every split holds the same number of videos of each kind.
struct DatasetConfig {
  int train_per_kind = 40;
  int val_per_kind = 10;
  int test_per_kind = 10;
  int size = 32;
  int frames = 5;
  double pose_jitter_deg = 15.0;
  double texture_jitter = 0.05;
  CameraModel camera{0.05, 8, 2.0, 2.0};
  std::uint64_t seed = 2024;

  void validate() const;
  int total() const noexcept { return kSubjectKinds * (train_per_kind + val_per_kind + test_per_kind); }
  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

/// Everything needed to re-synthesize one video.
struct ManifestEntry {
  std::string path;  ///< relative to the manifest's directory
  SubjectKind kind = SubjectKind::Live;
  Split split = Split::Train;
  bool live = false;
  std::uint64_t scene_seed = 0;
  std::uint64_t captcha_seed = 0;   ///< the issued challenge
  std::uint64_t replay_seed = 0;    ///< captcha of the leaked recording (replays only)
  std::uint64_t render_seed = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  int version = 1;
  DatasetConfig config;
  std::vector<ManifestEntry> entries;

  std::vector<const ManifestEntry*> split(Split s) const;
  int live_count() const;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Deterministic plan of every video from the master seed.
Manifest plan_dataset(const DatasetConfig& config);

/// Renders the video described by an entry.
VideoRecord synthesize_video(const ManifestEntry& entry, const DatasetConfig& config);

std::string manifest_to_json(const Manifest& manifest);
/// Throws IoError on malformed JSON, ValidationError on inconsistent content
/// (duplicate paths, unknown kinds).
Manifest manifest_from_json(const std::string& text);

inline constexpr const char* kManifestName = "manifest.json";

/// Writes every planned video plus manifest.json into `directory`.
Manifest write_dataset(const std::string& directory, const DatasetConfig& config);
Manifest read_manifest(const std::string& directory);
/// Loads the videos of one split, in manifest order.
std::vector<VideoRecord> load_split(const std::string& directory, const Manifest& manifest,
                                    Split split);

}  // namespace aurora
