#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "aurora/image.hpp"

namespace aurora {

/// The four material classes of the material decoder. Values are the
/// 1-based labels written into material label maps.
enum class MaterialClass : std::uint8_t {
  Environment = 1,
  RealFace = 2,
  Paper = 3,
  EyeScreen = 4,
};

inline constexpr int kMaterialClasses = 4;
inline constexpr int kDepthBins = 16;

/// Canonical albedo of a material; classes are ordered by brightness.
double canonical_albedo(MaterialClass m);

/// Grey level (0..255) used when visualising a material map: low albedo maps
/// to dark, high albedo to light.
std::uint8_t canonical_brightness(MaterialClass m);

std::string_view to_string(MaterialClass m);

enum class SubjectKind : std::uint8_t {
  Live = 0,
  PlanarSpoof = 1,
  Mask3D = 2,
  ModalityReplay = 3,
};

inline constexpr int kSubjectKinds = 4;

std::string_view to_string(SubjectKind k);
SubjectKind subject_kind_from_string(std::string_view name);

/// Liveness ground truth of a whole video. Only Live is genuine.
constexpr bool is_live(SubjectKind k) noexcept { return k == SubjectKind::Live; }

/// Whether the reflection content of the video is a genuine face. True for
/// live subjects and for replays of a recorded live session.
constexpr bool has_live_content(SubjectKind k) noexcept {
  return k == SubjectKind::Live || k == SubjectKind::ModalityReplay;
}

struct SubjectSpec {
  SubjectKind kind = SubjectKind::Live;
  std::uint64_t seed = 0;
  int height = 32;
  int width = 32;
  double pose_jitter_deg = 8.0;  ///< max in-plane / out-of-plane rotation
  double texture_jitter = 0.03;  ///< albedo noise amplitude, at most 0.05

  /// Throws ValidationError unless dims >= 16, pose jitter in [0, 15] and
  /// texture jitter in [0, 0.05].
  void validate() const;
};

/// Per-pixel unit normals, row-major.
class NormalMap {
 public:
  NormalMap() = default;
  NormalMap(int height, int width)
      : height_(height), width_(width),
        normals_(static_cast<std::size_t>(height) * width, Eigen::Vector3d::UnitZ()) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  Eigen::Vector3d& operator()(int y, int x) { return normals_[y * width_ + x]; }
  const Eigen::Vector3d& operator()(int y, int x) const { return normals_[y * width_ + x]; }
  const std::vector<Eigen::Vector3d>& values() const noexcept { return normals_; }

  friend bool operator==(const NormalMap&, const NormalMap&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Eigen::Vector3d> normals_;
};

/// A synthetic subject in front of the camera: geometry, materials and the
/// constant illumination terms of one capture session.
struct Scene {
  SubjectKind kind = SubjectKind::Live;
  ScalarMap depth;     ///< height toward the camera, in pixel units
  LabelMap material;   ///< MaterialClass labels 1..4
  ScalarMap albedo;    ///< rho in [0, 1]
  NormalMap normals;
  double ambient_weight = 0.2;
  Eigen::Vector3d light_direction = Eigen::Vector3d::UnitZ();
  /// Planted facial fiducials (eye centres, nose tip, mouth corners) in
  /// pixel coordinates; stand-in for a landmark detector.
  std::vector<Eigen::Vector2d> landmarks;

  int height() const noexcept { return depth.height(); }
  int width() const noexcept { return depth.width(); }
  bool is_face(int y, int x) const noexcept {
    return material(y, x) != static_cast<std::uint8_t>(MaterialClass::Environment);
  }

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Builds a synthetic subject. Pure function of the spec: the same spec yields
/// an identical Scene. Live, Mask3D and ModalityReplay subjects with equal seeds
/// share the same geometry and illumination.
Scene generate_scene(const SubjectSpec& spec);

/// Height-field normals n = normalize(-dZ/dx, -dZ/dy, 1), central differences
/// inside, one-sided at the borders. Requires a map of at least 3x3.
NormalMap normals_from_depth(const ScalarMap& depth);

/// Uniform quantization of the face depth range into `bins` labels (1..bins).
/// Background pixels get label 1, as does every face pixel of a flat face.
LabelMap quantize_depth_labels(const Scene& scene, int bins = kDepthBins);

}  // namespace aurora
