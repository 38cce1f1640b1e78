#pragma once

#include <filesystem>
#include <variant>

#include "carto/raster.hpp"

namespace carto {

// Binary Netpbm I/O. Grayscale rasters are P5, multispectral rasters are P6
// with channels in (ch1, ch2, ch3) order; both use maxval 255. The ground
// sampling distance travels in a "# resolution <m/px>" header comment.

using Raster = std::variant<ScalarImage, MultiSpectralImage>;

Raster read_raster(const std::filesystem::path& path);
ScalarImage read_gray(const std::filesystem::path& path);
MultiSpectralImage read_multispectral(const std::filesystem::path& path);

/// Throws FormatError unless every value is an integer in [0, 255].
void write_raster(const ScalarImage& img, const std::filesystem::path& path);
void write_raster(const MultiSpectralImage& img, const std::filesystem::path& path);

/// Nonzero pixels read as set; masks are written with values {0, 255}.
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// Display-only dump: affine min-max normalization of arbitrary floats into [0, 255].
void write_normalized(const ScalarImage& img, const std::filesystem::path& path);

}  // namespace carto
