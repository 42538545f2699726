#include "aurora/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace aurora {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Face layout in normalised face coordinates (u across, v down, unit = semi-axis).
constexpr std::array<std::array<double, 2>, 5> kLandmarkLayout{{
    {-0.40, -0.22},  // left eye
    {0.40, -0.22},   // right eye
    {0.00, 0.12},    // nose tip
    {-0.32, 0.50},   // mouth corners
    {0.32, 0.50},
}};

struct Bump {
  double u, v, sigma, amplitude;
};

// Nose, brow ridges and eye sockets on top of the ellipsoidal base.
constexpr std::array<Bump, 5> kBumps{{
    {0.00, 0.08, 0.16, 0.30},
    {-0.40, -0.42, 0.14, 0.08},
    {0.40, -0.42, 0.14, 0.08},
    {-0.40, -0.20, 0.12, -0.07},
    {0.40, -0.20, 0.12, -0.07},
}};

// Shared face parameters; all randomness that must match across kinds.
struct FaceGeometry {
  double cx, cy;        // centre, px
  double ax, ay;        // semi-axes, px
  double height;        // peak height, px
  double roll;          // in-plane rotation, rad
  double tilt_x, tilt_y;
  Eigen::Vector3d light;
  double ambient;
};

FaceGeometry sample_geometry(const SubjectSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double w = spec.width;
  const double h = spec.height;
  FaceGeometry g{};
  g.cx = (w - 1) / 2.0 + 0.04 * w * unit(rng);
  g.cy = (h - 1) / 2.0 + 0.04 * h * unit(rng);
  g.ax = 0.34 * w * (1.0 + 0.06 * unit(rng));
  g.ay = 0.43 * h * (1.0 + 0.06 * unit(rng));
  g.height = 0.30 * std::min(w, h) * (1.0 + 0.10 * unit(rng));
  const double pose = spec.pose_jitter_deg * kDegToRad;
  g.roll = pose * unit(rng);
  g.tilt_x = std::tan(pose * unit(rng));
  g.tilt_y = std::tan(pose * unit(rng));

  // Screen light: within 20 degrees of the optical axis.
  const double polar = 20.0 * kDegToRad * std::sqrt(0.5 * (unit(rng) + 1.0));
  const double azimuth = std::numbers::pi * unit(rng);
  g.light = Eigen::Vector3d(std::sin(polar) * std::cos(azimuth),
                            std::sin(polar) * std::sin(azimuth), std::cos(polar));
  g.ambient = 0.05 + 0.45 * 0.5 * (unit(rng) + 1.0);
  return g;
}

// Face-local normalised coordinates of pixel (x, y).
Eigen::Vector2d to_face(const FaceGeometry& g, double x, double y) {
  const double dx = x - g.cx;
  const double dy = y - g.cy;
  const double c = std::cos(g.roll);
  const double s = std::sin(g.roll);
  return {(c * dx + s * dy) / g.ax, (-s * dx + c * dy) / g.ay};
}

Eigen::Vector2d from_face(const FaceGeometry& g, double u, double v) {
  const double c = std::cos(g.roll);
  const double s = std::sin(g.roll);
  const double dx = u * g.ax;
  const double dy = v * g.ay;
  return {g.cx + c * dx - s * dy, g.cy + s * dx + c * dy};
}

double face_height(const FaceGeometry& g, const Eigen::Vector2d& f) {
  const double r2 = f.squaredNorm();
  if (r2 >= 1.0) return 0.0;
  const double base = 1.0 - r2;
  double z = g.height * base * (1.0 + g.tilt_x * f.x() + g.tilt_y * f.y());
  for (const Bump& b : kBumps) {
    const double d2 = (f.x() - b.u) * (f.x() - b.u) + (f.y() - b.v) * (f.y() - b.v);
    z += g.height * base * b.amplitude * std::exp(-d2 / (2.0 * b.sigma * b.sigma));
  }
  return z;
}

bool in_eye(const Eigen::Vector2d& f) {
  for (int i = 0; i < 2; ++i) {
    const double du = (f.x() - kLandmarkLayout[i][0]) / 0.17;
    const double dv = (f.y() - kLandmarkLayout[i][1]) / 0.09;
    if (du * du + dv * dv <= 1.0) return true;
  }
  return false;
}

// Bounded albedo texture, |jitter| <= amplitude.
ScalarMap texture_field(int h, int w, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double fx = 0.2 + 0.4 * 0.5 * (unit(rng) + 1.0);
  const double fy = 0.2 + 0.4 * 0.5 * (unit(rng) + 1.0);
  const double px = std::numbers::pi * unit(rng);
  const double py = std::numbers::pi * unit(rng);
  ScalarMap t(1, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double smooth = std::sin(fx * x + px) * std::sin(fy * y + py);
      t(y, x) = amplitude * (0.6 * smooth + 0.4 * unit(rng));
    }
  }
  return t;
}

}  // namespace

double canonical_albedo(MaterialClass m) {
  switch (m) {
    case MaterialClass::Environment: return 0.15;
    case MaterialClass::RealFace: return 0.55;
    case MaterialClass::Paper: return 0.80;
    case MaterialClass::EyeScreen: return 0.95;
  }
  throw ValidationError("unknown material class");
}

std::uint8_t canonical_brightness(MaterialClass m) {
  return static_cast<std::uint8_t>(std::lround(255.0 * canonical_albedo(m)));
}

std::string_view to_string(MaterialClass m) {
  switch (m) {
    case MaterialClass::Environment: return "environment";
    case MaterialClass::RealFace: return "real_face";
    case MaterialClass::Paper: return "paper";
    case MaterialClass::EyeScreen: return "eye_screen";
  }
  return "unknown";
}

std::string_view to_string(SubjectKind k) {
  switch (k) {
    case SubjectKind::Live: return "live";
    case SubjectKind::PlanarSpoof: return "planar_spoof";
    case SubjectKind::Mask3D: return "mask3d";
    case SubjectKind::ModalityReplay: return "modality_replay";
  }
  return "unknown";
}

SubjectKind subject_kind_from_string(std::string_view name) {
  for (int i = 0; i < kSubjectKinds; ++i) {
    const auto k = static_cast<SubjectKind>(i);
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown subject kind '" + std::string(name) + "'");
}

void SubjectSpec::validate() const {
  if (height < 16 || width < 16) {
    throw ValidationError("subject resolution must be at least 16x16");
  }
  if (!(pose_jitter_deg >= 0.0 && pose_jitter_deg <= 15.0)) {
    throw ValidationError("pose_jitter must lie in [0, 15] degrees");
  }
  if (!(texture_jitter >= 0.0 && texture_jitter <= 0.05)) {
    throw ValidationError("texture_jitter must lie in [0, 0.05]");
  }
  if (static_cast<int>(kind) >= kSubjectKinds) {
    throw ValidationError("unknown subject kind");
  }
}

NormalMap normals_from_depth(const ScalarMap& depth) {
  const int h = depth.height();
  const int w = depth.width();
  if (h < 3 || w < 3) throw ValidationError("depth map must be at least 3x3");
  NormalMap n(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double zx, zy;
      if (x == 0) {
        zx = depth(y, 1) - depth(y, 0);
      } else if (x == w - 1) {
        zx = depth(y, w - 1) - depth(y, w - 2);
      } else {
        zx = 0.5 * (depth(y, x + 1) - depth(y, x - 1));
      }
      if (y == 0) {
        zy = depth(1, x) - depth(0, x);
      } else if (y == h - 1) {
        zy = depth(h - 1, x) - depth(h - 2, x);
      } else {
        zy = 0.5 * (depth(y + 1, x) - depth(y - 1, x));
      }
      n(y, x) = Eigen::Vector3d(-zx, -zy, 1.0).normalized();
    }
  }
  return n;
}

LabelMap quantize_depth_labels(const Scene& scene, int bins) {
  if (bins != kDepthBins) throw ValidationError("depth labels use exactly 16 bins");
  const int h = scene.height();
  const int w = scene.width();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double z = scene.depth(y, x);
      if (!std::isfinite(z)) throw ValidationError("depth map must be finite");
      if (!scene.is_face(y, x)) continue;
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
  }
  LabelMap labels(1, h, w, 1);
  if (!(hi > lo)) return labels;
  const double scale = bins / (hi - lo);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!scene.is_face(y, x)) continue;
      const int bin = static_cast<int>(std::floor((scene.depth(y, x) - lo) * scale));
      labels(y, x) = static_cast<std::uint8_t>(1 + std::clamp(bin, 0, bins - 1));
    }
  }
  return labels;
}

Scene generate_scene(const SubjectSpec& spec) {
  spec.validate();
  const int h = spec.height;
  const int w = spec.width;
  std::mt19937_64 rng(spec.seed);
  const FaceGeometry g = sample_geometry(spec, rng);
  const ScalarMap texture = texture_field(h, w, spec.texture_jitter, rng);
  std::bernoulli_distribution coin(0.5);
  const MaterialClass spoof_material = coin(rng) ? MaterialClass::Paper : MaterialClass::EyeScreen;

  Scene scene;
  scene.kind = spec.kind;
  scene.ambient_weight = g.ambient;
  scene.light_direction = g.light;
  for (const auto& lm : kLandmarkLayout) scene.landmarks.push_back(from_face(g, lm[0], lm[1]));

  ScalarMap live_depth(1, h, w);
  scene.material = LabelMap(1, h, w, static_cast<std::uint8_t>(MaterialClass::Environment));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector2d f = to_face(g, x, y);
      if (f.squaredNorm() >= 1.0) continue;
      live_depth(y, x) = face_height(g, f);
      MaterialClass m = in_eye(f) ? MaterialClass::EyeScreen : MaterialClass::RealFace;
      if (spec.kind == SubjectKind::PlanarSpoof || spec.kind == SubjectKind::Mask3D) {
        m = spoof_material;
      }
      scene.material(y, x) = static_cast<std::uint8_t>(m);
    }
  }

  scene.albedo = ScalarMap(1, h, w);
  if (spec.kind == SubjectKind::PlanarSpoof) {
    // The print / screen shows the live subject: its shading under a frontal
    // light is baked into the albedo as bounded texture.
    const NormalMap live_normals = normals_from_depth(live_depth);
    scene.depth = ScalarMap(1, h, w, 0.0);
    scene.normals = NormalMap(h, w);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double shade = std::clamp(live_normals(y, x).z(), 0.0, 1.0);
        const double baked = spec.texture_jitter * (0.7 * (2.0 * shade - 1.0) +
                                                    0.3 * texture(y, x) /
                                                        std::max(spec.texture_jitter, 1e-12));
        const auto m = static_cast<MaterialClass>(scene.material(y, x));
        scene.albedo(y, x) = std::clamp(canonical_albedo(m) + baked, 0.0, 1.0);
      }
    }
  } else {
    scene.depth = std::move(live_depth);
    scene.normals = normals_from_depth(scene.depth);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto m = static_cast<MaterialClass>(scene.material(y, x));
        scene.albedo(y, x) = std::clamp(canonical_albedo(m) + texture(y, x), 0.0, 1.0);
      }
    }
  }
  return scene;
}

}  // namespace aurora
