#pragma once

#include "carto/edges.hpp"
#include "carto/morph.hpp"
#include "carto/raster.hpp"

namespace carto {

struct MarkerSet {
  BinaryMask object_marker;      // skeleton of the matched mask
  BinaryMask background_marker;  // rim outside the dilated mask
};

/// Throws EmptyMarker / MarkerOverlap / DimensionMismatch on an unusable marker pair.
void validate(const MarkerSet& markers);

MarkerSet make_markers(const BinaryMask& mask, const StructuringElement& se, int prune_spurs = 0);

inline constexpr int kWatershedLine = -1;
inline constexpr int kUnlabeled = 0;

struct LabelImage {
  Image<int> labels;       // 1..object_basins are object basins, then background basins; -1 = line
  int object_basins = 0;
  int background_basins = 0;
};

/// Sobel magnitude with replicated borders.
ScalarImage gradient_magnitude(const ScalarImage& img);

/// Copy of `gradient` with every edge pixel raised to the input's global maximum.
ScalarImage inject_edges(const ScalarImage& gradient, const BinaryMask& edge_pixels);
ScalarImage inject_edges(const ScalarImage& gradient, const EdgeSet& edges);

/// Minima imposition: markers drop below the global minimum, everything else is
/// reconstructed by erosion (8-connected) from them over relief + step.
/// Either marker may be empty; overlapping markers throw MarkerOverlap.
ScalarImage impose_minima(const ScalarImage& relief, const MarkerSet& markers, float step = 1.0f);

/// Marker labels per 8-connected component: object components first, row-major.
LabelImage seed_labels(const MarkerSet& markers);

/// Priority-queue immersion from the markers over 4-connected pixels. A pixel's flooding
/// level is max(its relief, the level of the pixel that reached it); equal levels pop in
/// FIFO order. A pixel whose labelled neighbours disagree when it pops becomes a line
/// pixel and is not propagated; pixels never reached end up as line pixels too.
LabelImage watershed_flood(const ScalarImage& relief, const MarkerSet& markers);

/// Union of the basins grown from object-marker components.
BinaryMask extract_object(const LabelImage& labels);

/// Debug rendering: basin l maps to gray 1 + (l - 1) % 254, unlabeled to 0, watershed lines to 255.
ScalarImage label_dump(const LabelImage& labels);

struct ExtractionParams {
  StructuringElement boundary_se = StructuringElement::disk(2);
  int prune_spurs = 0;
  float minima_step = 1.0f;
};

struct Extraction {
  MarkerSet markers;
  ScalarImage gradient;
  ScalarImage injected;
  ScalarImage relief;
  LabelImage labels;
  BinaryMask object;
};

/// The full marker-controlled watershed for a mask already placed on the pan image.
Extraction extract(const ScalarImage& pan, const BinaryMask& placed_mask, const BinaryMask& edge_pixels,
                   const ExtractionParams& params = {});

}  // namespace carto
