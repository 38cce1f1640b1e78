#pragma once

#include <optional>
#include <vector>

#include "carto/raster.hpp"
#include "carto/spectral.hpp"

namespace carto {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b);

/// Ordered sub-pixel polyline in pixel coordinates.
struct EdgeChain {
  std::vector<Point2> points;
  bool closed = false;

  double arc_length() const;
};

struct EdgeSet {
  std::vector<EdgeChain> chains;
  int width = 0;
  int height = 0;

  std::size_t point_count() const;
};

struct CannyParams {
  double sigma = 1.5;
  /// Fixed gradient-magnitude thresholds; when unset they come from the percentile rule.
  std::optional<ThresholdPair> thresholds;
  double high_percentile = 0.9;
  double low_ratio = 0.4;
};

struct Gradient {
  ScalarImage gx;
  ScalarImage gy;
  ScalarImage magnitude;
};

/// Separable Gaussian smoothing with replicated borders.
ScalarImage gaussian_blur(const ScalarImage& img, double sigma);

/// Central-difference gradient of the Gaussian-smoothed image (what canny thresholds).
Gradient smoothed_gradient(const ScalarImage& img, double sigma);

/// Thresholds used by canny when none are given: high is the given percentile of
/// nonzero magnitudes, low = low_ratio * high.
ThresholdPair percentile_thresholds(const ScalarImage& magnitude, double high_percentile, double low_ratio);

/// Non-maximum suppressed, hysteresis-linked pixels before chain tracing.
BinaryMask canny_pixels(const Gradient& g, const ThresholdPair& t);

EdgeSet canny(const ScalarImage& img, const CannyParams& params = {});

struct RefineParams {
  double merge_dist = 3.0;
  double min_len = 10.0;
  int smooth_window = 3;
};

/// Moving-average smoothing, nearest-first endpoint merging, then short-chain removal.
EdgeSet refine_edges(const EdgeSet& edges, const RefineParams& params = {});

/// Rounds chain vertices and joins consecutive ones with 8-connected line segments.
BinaryMask rasterize(const EdgeSet& edges, int width, int height);

/// Rasterizes every vertex half a pixel against the smoothed gradient of `img`, so an edge lying
/// between two pixels claims the darker one. Used where the raster must stay outside bright objects.
BinaryMask rasterize_dark_side(const EdgeSet& edges, const ScalarImage& img, double sigma);

}  // namespace carto
