#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "carto/error.hpp"

namespace carto {

/// Row-major 2-D raster with a ground sampling distance in meters/pixel.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, double resolution = 1.0, T fill = T{})
      : width_(width), height_(height), resolution_(resolution) {
    if (width <= 0 || height <= 0 || !(resolution > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "image dimensions and resolution must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Image(int width, int height, double resolution, std::vector<T> data)
      : width_(width), height_(height), resolution_(resolution), data_(std::move(data)) {
    if (width <= 0 || height <= 0 || !(resolution > 0.0) ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::InvalidArgument, "image data does not match dimensions");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Edge-clamped read.
  const T& at_clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<T> data_;
};

using ScalarImage = Image<float>;
using ByteImage = Image<std::uint8_t>;

/// Boolean raster; pixels hold 0 or 1.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height) : bits_(width, height, 1.0, std::uint8_t{0}) {}

  int width() const noexcept { return bits_.width(); }
  int height() const noexcept { return bits_.height(); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool contains(int x, int y) const noexcept { return bits_.contains(x, y); }
  std::size_t index(int x, int y) const noexcept { return bits_.index(x, y); }

  bool operator()(int x, int y) const noexcept { return bits_(x, y) != 0; }
  bool get(int x, int y) const noexcept { return contains(x, y) && bits_(x, y) != 0; }
  void set(int x, int y, bool on = true) noexcept { bits_(x, y) = on ? 1 : 0; }

  std::span<std::uint8_t> bits() noexcept { return bits_.pixels(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_.pixels(); }

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool same_shape(const auto& other) const noexcept {
    return width() == other.width() && height() == other.height();
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  ByteImage bits_;
};

/// Three co-registered channels sharing dimensions and resolution.
class MultiSpectralImage {
 public:
  MultiSpectralImage() = default;
  MultiSpectralImage(ScalarImage ch1, ScalarImage ch2, ScalarImage ch3);

  int width() const noexcept { return channels_[0].width(); }
  int height() const noexcept { return channels_[0].height(); }
  double resolution() const noexcept { return channels_[0].resolution(); }

  const ScalarImage& channel(int i) const { return channels_.at(static_cast<std::size_t>(i)); }
  const std::array<ScalarImage, 3>& channels() const noexcept { return channels_; }

  friend bool operator==(const MultiSpectralImage&, const MultiSpectralImage&) = default;

 private:
  std::array<ScalarImage, 3> channels_;
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

ScalarImage to_scalar(const ByteImage& img);

ScalarImage clip_center(const ScalarImage& img, int out_w, int out_h);
MultiSpectralImage clip_center(const MultiSpectralImage& img, int out_w, int out_h);
BinaryMask clip_center(const BinaryMask& mask, int out_w, int out_h);

/// Bilinear up-sampling with pixel-center alignment and edge clamping.
/// The output resolution is the input resolution divided by `factor`.
ScalarImage magnify(const ScalarImage& img, int factor);
MultiSpectralImage magnify(const MultiSpectralImage& img, int factor);

/// Shift by (dx, dy); content moved off the frame is dropped.
BinaryMask translate(const BinaryMask& mask, Offset offset);
ScalarImage translate(const ScalarImage& img, Offset offset, float fill = 0.0f);

std::pair<float, float> min_max(const ScalarImage& img);

}  // namespace carto
