#pragma once

#include <vector>

#include "carto/match.hpp"
#include "carto/morph.hpp"
#include "carto/raster.hpp"
#include "carto/spectral.hpp"

// Straightforward single-threaded versions of the parallel kernels. They are written
// independently of the optimized code and serve as its test baseline and benchmark foil.
namespace carto::reference {

ScalarImage magnify(const ScalarImage& img, int factor);
ScalarImage band_combine(const MultiSpectralImage& ms, const BandWeights& weights = {});
/// Union of the mask translated by every element offset.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
/// Direct 2-D convolution with the outer-product kernel.
ScalarImage gaussian_blur(const ScalarImage& img, double sigma);
ScalarImage gradient_magnitude(const ScalarImage& img);
/// Materializes translate -> dilate -> intersect per offset; two-pass variance.
std::vector<MatchCandidate> score_offsets(const BinaryMask& mask, const BinaryMask& edge_pixels,
                                          const ScalarImage& pan, const MatchParams& params);

}  // namespace carto::reference
