#include "aurora/dataset.hpp"

#include <filesystem>
#include <set>

#include "json.hpp"

#include "aurora/binary_io.hpp"

namespace aurora {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kSplitNames{"train", "val", "test"};

}  // namespace

std::string_view to_string(Split s) { return kSplitNames.at(static_cast<std::size_t>(s)); }

Split split_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == name) return static_cast<Split>(i);
  }
  throw ValidationError("unknown split '" + std::string(name) + "'");
}

void DatasetConfig::validate() const {
  if (train_per_kind < 0 || val_per_kind < 0 || test_per_kind < 0 || total() == 0) {
    throw ValidationError("dataset counts must be non-negative and not all zero");
  }
  if (frames < 3) throw ValidationError("videos need at least 3 frames");
  SubjectSpec spec;
  spec.height = spec.width = size;
  spec.pose_jitter_deg = pose_jitter_deg;
  spec.texture_jitter = texture_jitter;
  spec.validate();
  camera.validate();
}

std::vector<const ManifestEntry*> Manifest::split(Split s) const {
  std::vector<const ManifestEntry*> out;
  for (const ManifestEntry& e : entries) {
    if (e.split == s) out.push_back(&e);
  }
  return out;
}

int Manifest::live_count() const {
  int n = 0;
  for (const ManifestEntry& e : entries) n += e.live ? 1 : 0;
  return n;
}

Manifest plan_dataset(const DatasetConfig& config) {
  config.validate();
  Manifest m;
  m.config = config;
  std::uint64_t j = 0;
  const std::array<std::pair<Split, int>, 3> splits{{{Split::Train, config.train_per_kind},
                                                     {Split::Validation, config.val_per_kind},
                                                     {Split::Test, config.test_per_kind}}};
  for (const auto& [split, count] : splits) {
    for (int i = 0; i < count; ++i) {
      for (int k = 0; k < kSubjectKinds; ++k, ++j) {
        ManifestEntry e;
        e.kind = static_cast<SubjectKind>(k);
        e.split = split;
        e.live = is_live(e.kind);
        e.scene_seed = mix_seed(config.seed, 1000 + j);
        e.captcha_seed = mix_seed(config.seed, 2000 + j);
        e.replay_seed = e.kind == SubjectKind::ModalityReplay ? mix_seed(config.seed, 3000 + j) : 0;
        e.render_seed = mix_seed(config.seed, 4000 + j);
        char name[64];
        std::snprintf(name, sizeof name, "%s_%04llu_%s.agvd", std::string(to_string(split)).c_str(),
                      static_cast<unsigned long long>(j), std::string(to_string(e.kind)).c_str());
        e.path = name;
        m.entries.push_back(std::move(e));
      }
    }
  }
  return m;
}

VideoRecord synthesize_video(const ManifestEntry& entry, const DatasetConfig& config) {
  SubjectSpec spec;
  spec.kind = entry.kind;
  spec.seed = entry.scene_seed;
  spec.height = spec.width = config.size;
  spec.pose_jitter_deg = config.pose_jitter_deg;
  spec.texture_jitter = config.texture_jitter;
  const Scene scene = generate_scene(spec);

  VideoRecord v;
  v.captcha = generate_captcha(config.frames, entry.captcha_seed);
  if (entry.kind == SubjectKind::ModalityReplay) {
    const LightCaptcha original = generate_captcha(config.frames, entry.replay_seed);
    v.frames = render_modality_replay(original, scene, v.captcha, config.camera, entry.render_seed);
  } else {
    v.frames = render_video(scene, v.captcha, config.camera, entry.render_seed);
  }
  v.depth_labels = quantize_depth_labels(scene);
  v.material_labels = scene.material;
  v.live = entry.live;
  v.kind = entry.kind;
  return v;
}

std::string manifest_to_json(const Manifest& m) {
  const DatasetConfig& c = m.config;
  json j;
  j["version"] = m.version;
  j["config"] = {{"train_per_kind", c.train_per_kind},
                 {"val_per_kind", c.val_per_kind},
                 {"test_per_kind", c.test_per_kind},
                 {"size", c.size},
                 {"frames", c.frames},
                 {"pose_jitter_deg", c.pose_jitter_deg},
                 {"texture_jitter", c.texture_jitter},
                 {"noise_sigma", c.camera.noise_sigma},
                 {"quantize_bits", c.camera.quantize_bits},
                 {"max_shift_px", c.camera.max_shift_px},
                 {"max_rotation_deg", c.camera.max_rotation_deg},
                 {"seed", c.seed}};
  j["live_count"] = m.live_count();
  j["spoof_count"] = static_cast<int>(m.entries.size()) - m.live_count();
  json videos = json::array();
  for (const ManifestEntry& e : m.entries) {
    videos.push_back({{"path", e.path},
                      {"kind", to_string(e.kind)},
                      {"split", to_string(e.split)},
                      {"live", e.live},
                      {"scene_seed", e.scene_seed},
                      {"captcha_seed", e.captcha_seed},
                      {"replay_seed", e.replay_seed},
                      {"render_seed", e.render_seed}});
  }
  j["videos"] = std::move(videos);
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    Manifest m;
    m.version = j.at("version").get<int>();
    if (m.version != 1) throw IoError("unsupported manifest version " + std::to_string(m.version));
    const json& c = j.at("config");
    DatasetConfig& cfg = m.config;
    cfg.train_per_kind = c.at("train_per_kind").get<int>();
    cfg.val_per_kind = c.at("val_per_kind").get<int>();
    cfg.test_per_kind = c.at("test_per_kind").get<int>();
    cfg.size = c.at("size").get<int>();
    cfg.frames = c.at("frames").get<int>();
    cfg.pose_jitter_deg = c.at("pose_jitter_deg").get<double>();
    cfg.texture_jitter = c.at("texture_jitter").get<double>();
    cfg.camera.noise_sigma = c.at("noise_sigma").get<double>();
    cfg.camera.quantize_bits = c.at("quantize_bits").get<int>();
    cfg.camera.max_shift_px = c.at("max_shift_px").get<double>();
    cfg.camera.max_rotation_deg = c.at("max_rotation_deg").get<double>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.validate();
    std::set<std::string> paths;
    for (const json& v : j.at("videos")) {
      ManifestEntry e;
      e.path = v.at("path").get<std::string>();
      e.kind = subject_kind_from_string(v.at("kind").get<std::string>());
      e.split = split_from_string(v.at("split").get<std::string>());
      e.live = v.at("live").get<bool>();
      e.scene_seed = v.at("scene_seed").get<std::uint64_t>();
      e.captcha_seed = v.at("captcha_seed").get<std::uint64_t>();
      e.replay_seed = v.at("replay_seed").get<std::uint64_t>();
      e.render_seed = v.at("render_seed").get<std::uint64_t>();
      if (!paths.insert(e.path).second) throw ValidationError("duplicate video path " + e.path);
      if (e.live != is_live(e.kind)) throw ValidationError("liveness label disagrees with kind");
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest write_dataset(const std::string& directory, const DatasetConfig& config) {
  const Manifest m = plan_dataset(config);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create dataset directory " + directory + ": " + ec.message());
  const std::filesystem::path root(directory);
  for (const ManifestEntry& e : m.entries) {
    save_video((root / e.path).string(), synthesize_video(e, config));
  }
  write_file((root / kManifestName).string(), manifest_to_json(m));
  return m;
}

Manifest read_manifest(const std::string& directory) {
  return manifest_from_json(
      read_file((std::filesystem::path(directory) / kManifestName).string()));
}

std::vector<VideoRecord> load_split(const std::string& directory, const Manifest& manifest,
                                    Split split) {
  std::vector<VideoRecord> out;
  for (const ManifestEntry* e : manifest.split(split)) {
    out.push_back(load_video((std::filesystem::path(directory) / e->path).string()));
  }
  return out;
}

}  // namespace aurora
