#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aurora/error.hpp"

namespace aurora {

/// Dense planar (channel-major) image. Pixel (c, y, x) lives at
/// data[(c * height + y) * width + x].
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int channels, int height, int width, T fill = T{})
      : channels_(channels), height_(height), width_(width) {
    if (channels <= 0 || height <= 0 || width <= 0) {
      throw ValidationError("image dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
  }

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }

  T& operator()(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
  const T& operator()(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }
  T& operator()(int y, int x) noexcept { return data_[index(0, y, x)]; }
  const T& operator()(int y, int x) const noexcept { return data_[index(0, y, x)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> plane(int c) noexcept { return data().subspan(c * plane_size(), plane_size()); }
  std::span<const T> plane(int c) const noexcept {
    return data().subspan(c * plane_size(), plane_size());
  }

  bool same_shape(const Image& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

using ScalarMap = Image<double>;
using LabelMap = Image<std::uint8_t>;

}  // namespace aurora
