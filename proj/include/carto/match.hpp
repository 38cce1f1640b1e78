#pragma once

#include <vector>

#include "carto/edges.hpp"
#include "carto/morph.hpp"
#include "carto/raster.hpp"

namespace carto {

struct MatchParams {
  int half_window = 10;
  StructuringElement se = StructuringElement::disk(2);
};

struct MatchCandidate {
  Offset offset;
  long score = 0;
  double variance = 0.0;  // +inf when the shifted mask leaves the frame entirely
};

struct MatchResult {
  Offset offset;
  long score = 0;
  double variance = 0.0;
  int tie_count = 0;       // candidates sharing the best score
  bool no_edges = false;   // warning: nothing to match against
};

/// Scores every offset in [-hw, hw]^2, row-major in (dy, dx). The score counts edge
/// pixels inside the dilation of the shifted mask; the variance is taken over pan values
/// under the shifted, undilated mask. Mask pixels shifted off the frame are dropped.
std::vector<MatchCandidate> score_offsets(const BinaryMask& mask, const BinaryMask& edge_pixels,
                                          const ScalarImage& pan, const MatchParams& params);

/// Highest score, then smallest variance, then smallest (dy, dx).
MatchResult select_best(const std::vector<MatchCandidate>& candidates);

MatchResult match_mask(const BinaryMask& mask, const BinaryMask& edge_pixels, const ScalarImage& pan,
                       const MatchParams& params = {});
MatchResult match_mask(const BinaryMask& mask, const EdgeSet& edges, const ScalarImage& pan,
                       const MatchParams& params = {});

}  // namespace carto
