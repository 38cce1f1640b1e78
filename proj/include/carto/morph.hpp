#pragma once

#include <vector>

#include "carto/raster.hpp"

namespace carto {

struct StructuringElement {
  enum class Shape { disk, square };

  Shape shape = Shape::disk;
  int radius = 1;

  static StructuringElement disk(int radius) { return {Shape::disk, radius}; }
  static StructuringElement square(int radius) { return {Shape::square, radius}; }

  /// Offsets covered by the element, row-major.
  std::vector<Offset> offsets() const;
};

enum class Connectivity { four = 4, eight = 8 };

/// Connected-component labelling; labels are 1-based in row-major order of first pixel, 0 = background.
struct Components {
  Image<int> labels;
  int count = 0;
};
Components connected_components(const BinaryMask& mask, Connectivity conn);

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// Pixels whose whole neighbourhood lies inside the mask; the frame counts as background.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

/// Chamfer (3-4) distance to the nearest background pixel, in pixels.
Image<float> distance_transform(const BinaryMask& mask);

/// Sets every background pixel that is not connected (4-connectivity) to the frame.
BinaryMask fill_holes(const BinaryMask& mask);

/// One-pixel rim just outside the hole-filled dilation of `mask`.
BinaryMask external_boundary(const BinaryMask& mask, const StructuringElement& se);

/// Zhang-Suen thinning, with each candidate deletion re-checked as an 8-simple point
/// so the component count never changes. `prune_spurs` > 0 removes terminal branches
/// shorter than that many pixels.
BinaryMask skeletonize(const BinaryMask& mask, int prune_spurs = 0);

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b);

/// Number of set 8-neighbours.
int neighbour_count(const BinaryMask& mask, int x, int y);

}  // namespace carto
