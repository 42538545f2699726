#include "aurora/checkpoint.hpp"

#include "aurora/binary_io.hpp"

namespace aurora::ad {

std::string encode_checkpoint(const std::vector<NamedTensor>& tensors) {
  ByteWriter w;
  w.bytes(kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (element_count(t.shape) != t.values.size()) {
      throw ValidationError("checkpoint tensor '" + t.name + "' does not match its shape");
    }
    w.u32(static_cast<std::uint32_t>(t.name.size()));
    w.bytes(t.name);
    w.u32(static_cast<std::uint32_t>(t.shape.size()));
    for (int d : t.shape) w.u32(static_cast<std::uint32_t>(d));
    for (float v : t.values) w.f32(v);
  }
  return w.buffer();
}

std::vector<NamedTensor> decode_checkpoint(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.bytes(4) != kCheckpointMagic) {
    throw IoError("not a checkpoint (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name = std::string(r.bytes(r.u32()));
    const std::uint32_t rank = r.u32();
    if (rank > 8) throw IoError("checkpoint tensor '" + t.name + "' has implausible rank");
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const std::uint32_t dim = r.u32();
      if (dim == 0 || dim > (1u << 24)) throw IoError("checkpoint dimension out of range");
      t.shape.push_back(static_cast<int>(dim));
      n *= dim;
    }
    if (n * 4 > r.remaining()) throw IoError("checkpoint truncated in tensor '" + t.name + "'");
    t.values.resize(n);
    for (float& v : t.values) v = r.f32();
    out.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw IoError("checkpoint has trailing bytes");
  return out;
}

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors) {
  write_file(path, encode_checkpoint(tensors));
}

std::vector<NamedTensor> load_checkpoint(const std::string& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace aurora::ad
