#include "carto/raster.hpp"

#include <algorithm>
#include <cmath>

namespace carto {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ClipTooLarge: return "ClipTooLarge";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyMarker: return "EmptyMarker";
    case ErrorCode::MarkerOverlap: return "MarkerOverlap";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.pixels().begin(), bits_.pixels().end(), std::uint8_t{1}));
}

bool BinaryMask::any() const noexcept {
  return std::any_of(bits_.pixels().begin(), bits_.pixels().end(), [](std::uint8_t b) { return b != 0; });
}

MultiSpectralImage::MultiSpectralImage(ScalarImage ch1, ScalarImage ch2, ScalarImage ch3)
    : channels_{std::move(ch1), std::move(ch2), std::move(ch3)} {
  for (const auto& ch : channels_) {
    if (!ch.same_shape(channels_[0]) || ch.resolution() != channels_[0].resolution()) {
      throw Error(ErrorCode::DimensionMismatch, "multispectral channels are not co-registered");
    }
  }
}

ScalarImage to_scalar(const ByteImage& img) {
  ScalarImage out(img.width(), img.height(), img.resolution());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                 [](std::uint8_t v) { return static_cast<float>(v); });
  return out;
}

namespace {

// Window origin; an odd remainder shifts the window toward the right/bottom.
std::pair<int, int> clip_origin(int width, int height, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0 || out_w > width || out_h > height) {
    throw Error(ErrorCode::ClipTooLarge, "clip window " + std::to_string(out_w) + "x" +
                                             std::to_string(out_h) + " exceeds " + std::to_string(width) +
                                             "x" + std::to_string(height));
  }
  return {(width - out_w + 1) / 2, (height - out_h + 1) / 2};
}

}  // namespace

ScalarImage clip_center(const ScalarImage& img, int out_w, int out_h) {
  const auto [x0, y0] = clip_origin(img.width(), img.height(), out_w, out_h);
  ScalarImage out(out_w, out_h, img.resolution());
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) out(x, y) = img(x0 + x, y0 + y);
  return out;
}

MultiSpectralImage clip_center(const MultiSpectralImage& img, int out_w, int out_h) {
  return {clip_center(img.channel(0), out_w, out_h), clip_center(img.channel(1), out_w, out_h),
          clip_center(img.channel(2), out_w, out_h)};
}

BinaryMask clip_center(const BinaryMask& mask, int out_w, int out_h) {
  const auto [x0, y0] = clip_origin(mask.width(), mask.height(), out_w, out_h);
  BinaryMask out(out_w, out_h);
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) out.set(x, y, mask(x0 + x, y0 + y));
  return out;
}

ScalarImage magnify(const ScalarImage& img, int factor) {
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "magnification factor must be >= 1");
  if (factor == 1) return img;
  const int w = img.width();
  const int h = img.height();
  const int ow = w * factor;
  const int oh = h * factor;
  ScalarImage out(ow, oh, img.resolution() / factor);
  const double inv = 1.0 / factor;

#pragma omp parallel for schedule(static)
  for (int oy = 0; oy < oh; ++oy) {
    const double sy = std::clamp((oy + 0.5) * inv - 0.5, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double ty = sy - y0;
    for (int ox = 0; ox < ow; ++ox) {
      const double sx = std::clamp((ox + 0.5) * inv - 0.5, 0.0, static_cast<double>(w - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double tx = sx - x0;
      const double top = img(x0, y0) + (img(x1, y0) - static_cast<double>(img(x0, y0))) * tx;
      const double bottom = img(x0, y1) + (img(x1, y1) - static_cast<double>(img(x0, y1))) * tx;
      out(ox, oy) = static_cast<float>(top + (bottom - top) * ty);
    }
  }
  return out;
}

MultiSpectralImage magnify(const MultiSpectralImage& img, int factor) {
  return {magnify(img.channel(0), factor), magnify(img.channel(1), factor), magnify(img.channel(2), factor)};
}

BinaryMask translate(const BinaryMask& mask, Offset offset) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(x, y) && out.contains(x + offset.dx, y + offset.dy)) out.set(x + offset.dx, y + offset.dy);
    }
  }
  return out;
}

ScalarImage translate(const ScalarImage& img, Offset offset, float fill) {
  ScalarImage out(img.width(), img.height(), img.resolution(), fill);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (out.contains(x + offset.dx, y + offset.dy)) out(x + offset.dx, y + offset.dy) = img(x, y);
    }
  }
  return out;
}

std::pair<float, float> min_max(const ScalarImage& img) {
  const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
  return {*lo, *hi};
}

}  // namespace carto
