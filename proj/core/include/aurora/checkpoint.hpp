#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "aurora/autodiff.hpp"

namespace aurora::ad {

inline constexpr std::string_view kCheckpointMagic = "AGCK";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Shape shape;
  std::vector<float> values;
  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

/// "AGCK", u32 version, u32 tensor count, then per tensor: u32 name length,
/// name bytes, u32 rank, rank x u32 dims, little-endian f32 values.
std::string encode_checkpoint(const std::vector<NamedTensor>& tensors);
/// Throws IoError on bad magic, unknown version, truncation or trailing bytes.
std::vector<NamedTensor> decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

}  // namespace aurora::ad
