#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "carto/edges.hpp"
#include "carto/raster.hpp"

namespace carto {

// Geometry is in meters in the image frame (x right, y down). Orientations are
// counter-clockwise from +x as seen on the map (north up), folded into [0, pi).

struct RectanglePrimitive {
  Point2 center;
  double width = 0.0;   // along `orientation`, the longer side
  double height = 0.0;  // across
  double orientation = 0.0;
};

struct CirclePrimitive {
  Point2 center;
  double radius = 0.0;
};

struct SegmentPrimitive {
  Point2 a;
  Point2 b;

  double length() const { return distance(a, b); }
  double orientation() const;
};

using Primitive = std::variant<RectanglePrimitive, CirclePrimitive, SegmentPrimitive>;

enum class PrimitiveKind { rectangle, circle, segment };

PrimitiveKind kind_of(const Primitive& p);
std::string_view to_string(PrimitiveKind kind);
PrimitiveKind primitive_kind_from_string(std::string_view s);

/// Map bearing of a vector given in image coordinates, folded into [0, pi).
double map_bearing(double dx, double dy);

Point2 center_of(const Primitive& p);

/// Distance from a point to the primitive's region (0 inside).
double distance_to(const Primitive& p, Point2 q);

/// Region-to-region distance, 0 if they touch or overlap.
double distance_between(const Primitive& a, const Primitive& b);

/// Segment endpoints, or the midpoints of a rectangle's short sides; circles have none.
std::vector<Point2> ends_of(const Primitive& p);

enum class DecomposeMode { shapes, skeleton };

struct DecomposeParams {
  DecomposeMode mode = DecomposeMode::shapes;
  double meters_per_pixel = 2.5;
  double circularity = 0.85;  // isoperimetric ratio above which a blob is a circle
  int min_area = 8;           // pixels; smaller pieces are dropped
  int prune_spurs = 3;        // skeleton mode
};

/// 4*pi*area / perimeter^2 with the perimeter measured along the traced outer contour.
double isoperimetric_ratio(const BinaryMask& component);

RectanglePrimitive fit_rectangle(const BinaryMask& component, double meters_per_pixel);
CirclePrimitive fit_circle(const BinaryMask& component, double meters_per_pixel);

std::vector<Primitive> decompose(const BinaryMask& mask, const DecomposeParams& params = {});

}  // namespace carto
