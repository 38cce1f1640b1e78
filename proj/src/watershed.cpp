#include "carto/watershed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <tuple>

namespace carto {
namespace {

constexpr std::array<Offset, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<Offset, 8> kN8{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

struct QueueEntry {
  float level;
  std::uint64_t order;
  int x;
  int y;
};

struct Later {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    return std::tie(a.level, a.order) > std::tie(b.level, b.order);
  }
};

using FloodQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, Later>;

}  // namespace

namespace {

void check_disjoint(const MarkerSet& markers) {
  if (!markers.object_marker.same_shape(markers.background_marker)) {
    throw Error(ErrorCode::DimensionMismatch, "marker dimensions differ");
  }
  for (std::size_t i = 0; i < markers.object_marker.size(); ++i) {
    if (markers.object_marker.bits()[i] && markers.background_marker.bits()[i]) {
      throw Error(ErrorCode::MarkerOverlap, "object and background markers intersect");
    }
  }
}

}  // namespace

void validate(const MarkerSet& markers) {
  check_disjoint(markers);
  if (!markers.object_marker.any()) throw Error(ErrorCode::EmptyMarker, "object marker is empty");
  if (!markers.background_marker.any()) throw Error(ErrorCode::EmptyMarker, "background marker is empty");
}

MarkerSet make_markers(const BinaryMask& mask, const StructuringElement& se, int prune_spurs) {
  return {skeletonize(mask, prune_spurs), external_boundary(mask, se)};
}

ScalarImage gradient_magnitude(const ScalarImage& img) {
  const int w = img.width(), h = img.height();
  ScalarImage out(w, h, img.resolution());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto v = [&](int dx, int dy) { return static_cast<double>(img.at_clamped(x + dx, y + dy)); };
      const double gx = (v(1, -1) + 2.0 * v(1, 0) + v(1, 1)) - (v(-1, -1) + 2.0 * v(-1, 0) + v(-1, 1));
      const double gy = (v(-1, 1) + 2.0 * v(0, 1) + v(1, 1)) - (v(-1, -1) + 2.0 * v(0, -1) + v(1, -1));
      out(x, y) = static_cast<float>(std::sqrt(gx * gx + gy * gy));
    }
  }
  return out;
}

ScalarImage inject_edges(const ScalarImage& gradient, const BinaryMask& edge_pixels) {
  if (!edge_pixels.same_shape(gradient)) throw Error(ErrorCode::DimensionMismatch, "edge raster size differs");
  ScalarImage out = gradient;
  const float peak = min_max(gradient).second;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (edge_pixels.bits()[i]) out.pixels()[i] = peak;
  return out;
}

ScalarImage inject_edges(const ScalarImage& gradient, const EdgeSet& edges) {
  return inject_edges(gradient, rasterize(edges, gradient.width(), gradient.height()));
}

ScalarImage impose_minima(const ScalarImage& relief, const MarkerSet& markers, float step) {
  check_disjoint(markers);
  if (!markers.object_marker.same_shape(relief)) throw Error(ErrorCode::DimensionMismatch, "marker size differs");
  if (!markers.object_marker.any() && !markers.background_marker.any()) {
    throw Error(ErrorCode::EmptyMarker, "no marker pixels to impose");
  }
  const float sentinel = min_max(relief).first - std::max(step, 1.0f);
  const int w = relief.width(), h = relief.height();
  ScalarImage out(w, h, relief.resolution(), 0.0f);
  BinaryMask done(w, h);
  FloodQueue queue;
  std::uint64_t order = 0;

  auto is_marker = [&](int x, int y) { return markers.object_marker(x, y) || markers.background_marker(x, y); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!is_marker(x, y)) continue;
      out(x, y) = sentinel;
      done.set(x, y);
      queue.push({sentinel, order++, x, y});
    }
  }
  // Reconstruction by erosion: each pixel takes the lowest pass level over which a marker reaches it.
  while (!queue.empty()) {
    const QueueEntry e = queue.top();
    queue.pop();
    for (auto o : kN8) {
      const int nx = e.x + o.dx, ny = e.y + o.dy;
      if (!relief.contains(nx, ny) || done(nx, ny)) continue;
      done.set(nx, ny);
      const float level = std::max(relief(nx, ny) + step, e.level);
      out(nx, ny) = level;
      queue.push({level, order++, nx, ny});
    }
  }
  return out;
}

LabelImage seed_labels(const MarkerSet& markers) {
  validate(markers);
  const Components obj = connected_components(markers.object_marker, Connectivity::eight);
  const Components bg = connected_components(markers.background_marker, Connectivity::eight);
  LabelImage out{Image<int>(markers.object_marker.width(), markers.object_marker.height(), 1.0, kUnlabeled),
                 obj.count, bg.count};
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (obj.labels.pixels()[i]) out.labels.pixels()[i] = obj.labels.pixels()[i];
    if (bg.labels.pixels()[i]) out.labels.pixels()[i] = obj.count + bg.labels.pixels()[i];
  }
  return out;
}

LabelImage watershed_flood(const ScalarImage& relief, const MarkerSet& markers) {
  LabelImage out = seed_labels(markers);
  if (!markers.object_marker.same_shape(relief)) throw Error(ErrorCode::DimensionMismatch, "marker size differs");
  auto& labels = out.labels;
  const int w = relief.width(), h = relief.height();
  Image<float> level(w, h, 1.0, 0.0f);
  BinaryMask queued(w, h);
  FloodQueue queue;
  std::uint64_t order = 0;

  auto push_neighbours = [&](int x, int y) {
    for (auto o : kN4) {
      const int nx = x + o.dx, ny = y + o.dy;
      if (!relief.contains(nx, ny) || labels(nx, ny) != kUnlabeled || queued(nx, ny)) continue;
      queued.set(nx, ny);
      const float lv = std::max(relief(nx, ny), level(x, y));
      level(nx, ny) = lv;
      queue.push({lv, order++, nx, ny});
    }
  };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (labels(x, y) > 0) level(x, y) = relief(x, y);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (labels(x, y) > 0) push_neighbours(x, y);

  while (!queue.empty()) {
    const QueueEntry e = queue.top();
    queue.pop();
    int label = kUnlabeled;
    for (auto o : kN4) {
      const int nx = e.x + o.dx, ny = e.y + o.dy;
      if (!relief.contains(nx, ny)) continue;
      const int l = labels(nx, ny);
      if (l <= 0) continue;
      if (label == kUnlabeled) {
        label = l;
      } else if (l != label) {
        label = kWatershedLine;
        break;
      }
    }
    labels(e.x, e.y) = label == kUnlabeled ? kWatershedLine : label;
    if (label > 0) push_neighbours(e.x, e.y);
  }
  for (auto& l : labels.pixels())
    if (l == kUnlabeled) l = kWatershedLine;
  return out;
}

BinaryMask extract_object(const LabelImage& labels) {
  BinaryMask out(labels.labels.width(), labels.labels.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int l = labels.labels.pixels()[i];
    out.bits()[i] = (l >= 1 && l <= labels.object_basins) ? 1 : 0;
  }
  return out;
}

ScalarImage label_dump(const LabelImage& labels) {
  const auto& l = labels.labels;
  ScalarImage out(l.width(), l.height(), l.resolution());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int v = l.pixels()[i];
    out.pixels()[i] = v == kWatershedLine ? 255.0f : (v <= 0 ? 0.0f : static_cast<float>(1 + (v - 1) % 254));
  }
  return out;
}

Extraction extract(const ScalarImage& pan, const BinaryMask& placed_mask, const BinaryMask& edge_pixels,
                   const ExtractionParams& params) {
  if (!placed_mask.same_shape(pan)) throw Error(ErrorCode::DimensionMismatch, "mask and pan sizes differ");
  Extraction ex;
  ex.markers = make_markers(placed_mask, params.boundary_se, params.prune_spurs);
  ex.gradient = gradient_magnitude(pan);
  ex.injected = inject_edges(ex.gradient, edge_pixels);
  ex.relief = impose_minima(ex.injected, ex.markers, params.minima_step);
  ex.labels = watershed_flood(ex.relief, ex.markers);
  ex.object = extract_object(ex.labels);
  return ex;
}

}  // namespace carto
