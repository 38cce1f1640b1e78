#pragma once

#include <span>
#include <vector>

#include "carto/raster.hpp"

namespace carto {

struct ThresholdPair {
  double t_high = 0.0;
  double t_low = 0.0;
};

/// Coefficients of the road-discriminating channel combination.
struct BandWeights {
  double ch1 = 0.3;
  double ch2 = 0.3;
  double ch3 = -1.0;
};

/// Image the threshold is estimated on and hysteresis is applied to.
enum class ThresholdSource { combined, ch1, ch2, ch3 };

struct SpectralParams {
  BandWeights weights;
  ThresholdSource source = ThresholdSource::combined;
  double delta = 10.0;  // t_low = t_high - delta
  int mode_window = 5;
};

/// Per-pixel weighted channel sum, kept as float (may be negative).
ScalarImage band_combine(const MultiSpectralImage& ms, const BandWeights& weights = {});

/// The image the mode and hysteresis operate on for the configured source.
ScalarImage threshold_image(const MultiSpectralImage& ms, const SpectralParams& params);

/// Pools the values of each image's central window, bins them to the nearest integer
/// and takes the most frequent bin (lowest bin on ties) as t_high.
ThresholdPair corpus_mode_threshold(std::span<const MultiSpectralImage> corpus, const SpectralParams& params = {});
ThresholdPair mode_threshold(std::span<const float> pooled_values, double delta);

/// Values of the central `window`x`window` block, row-major.
std::vector<float> central_window(const ScalarImage& img, int window);

/// Pixels >= t_low that are 8-connected to a pixel >= t_high.
BinaryMask hysteresis_segment(const ScalarImage& img, const ThresholdPair& t);

/// The 8-connected component with the largest overlap with the central window; when
/// nothing overlaps, the component closest to the image center. Empty in, empty out.
BinaryMask keep_central_component(const BinaryMask& mask, int window = 5);

}  // namespace carto
