#include "carto/primitives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <numbers>

#include "carto/morph.hpp"

namespace carto {
namespace {

constexpr double kPi = std::numbers::pi;

// Clockwise in image coordinates, starting east.
constexpr std::array<Offset, 8> kMoore{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int direction_index(int dx, int dy) {
  for (int k = 0; k < 8; ++k)
    if (kMoore[static_cast<std::size_t>(k)].dx == dx && kMoore[static_cast<std::size_t>(k)].dy == dy) return k;
  return 0;
}

struct PixelStats {
  double area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

PixelStats stats(const BinaryMask& m) {
  PixelStats s;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y)) continue;
      s.area += 1.0;
      s.cx += x;
      s.cy += y;
    }
  }
  if (s.area > 0) {
    s.cx /= s.area;
    s.cy /= s.area;
  }
  return s;
}

std::vector<BinaryMask> split_components(const BinaryMask& mask, int min_area) {
  const Components cc = connected_components(mask, Connectivity::eight);
  std::vector<BinaryMask> parts(static_cast<std::size_t>(cc.count), BinaryMask(mask.width(), mask.height()));
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (const int l = cc.labels(x, y)) parts[static_cast<std::size_t>(l - 1)].set(x, y);
  std::erase_if(parts, [&](const BinaryMask& p) { return static_cast<int>(p.count()) < min_area; });
  return parts;
}

BinaryMask render_disk(int width, int height, double cx, double cy, double r) {
  BinaryMask out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) out.set(x, y);
  return out;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a.bits()[i] & b.bits()[i];
    uni += a.bits()[i] | b.bits()[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

Point2 to_meters(double x, double y, double mpp) { return {x * mpp, y * mpp}; }

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {a.x + t * vx, a.y + t * vy});
}

// Unit vector of a map bearing, in image coordinates.
Point2 axis(double bearing) { return {std::cos(bearing), -std::sin(bearing)}; }

std::vector<Point2> boundary_samples(const Primitive& p, double spacing) {
  std::vector<Point2> out;
  auto along = [&](Point2 a, Point2 b) {
    const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing)));
    for (int i = 0; i <= n; ++i) out.push_back({a.x + (b.x - a.x) * i / n, a.y + (b.y - a.y) * i / n});
  };
  if (const auto* c = std::get_if<CirclePrimitive>(&p)) {
    const int n = std::max(16, static_cast<int>(std::ceil(2 * kPi * c->radius / spacing)));
    for (int i = 0; i < n; ++i) {
      const double t = 2 * kPi * i / n;
      out.push_back({c->center.x + c->radius * std::cos(t), c->center.y + c->radius * std::sin(t)});
    }
  } else if (const auto* r = std::get_if<RectanglePrimitive>(&p)) {
    const Point2 u = axis(r->orientation);
    const Point2 v{-u.y, u.x};
    std::array<Point2, 4> corners;
    const double hw = r->width / 2, hh = r->height / 2;
    const std::array<std::pair<double, double>, 4> signs{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    for (std::size_t k = 0; k < 4; ++k) {
      corners[k] = {r->center.x + signs[k].first * hw * u.x + signs[k].second * hh * v.x,
                    r->center.y + signs[k].first * hw * u.y + signs[k].second * hh * v.y};
    }
    for (std::size_t k = 0; k < 4; ++k) along(corners[k], corners[(k + 1) % 4]);
  } else {
    const auto& s = std::get<SegmentPrimitive>(p);
    along(s.a, s.b);
  }
  return out;
}

// Outer-contour length by Moore-neighbour tracing from the first pixel in raster order.
double contour_length(const BinaryMask& m) {
  int sx = -1, sy = -1;
  for (int y = 0; y < m.height() && sx < 0; ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y)) {
        sx = x;
        sy = y;
        break;
      }
  if (sx < 0) return 0.0;

  auto next = [&](int x, int y, int from_dir) -> std::optional<std::pair<int, int>> {
    // Scan clockwise starting just after the backtrack neighbour.
    for (int i = 1; i <= 8; ++i) {
      const int d = (from_dir + i) % 8;
      const int nx = x + kMoore[static_cast<std::size_t>(d)].dx, ny = y + kMoore[static_cast<std::size_t>(d)].dy;
      if (m.get(nx, ny)) return std::pair{nx, ny};
    }
    return std::nullopt;
  };

  // The west neighbour of the first raster pixel is background.
  auto first = next(sx, sy, 4);
  if (!first) return 0.0;
  double length = 0.0;
  int x = sx, y = sy;
  int back = 4;
  auto move = *first;
  const auto first_move = move;
  for (std::size_t guard = 0; guard < 8 * m.size() + 8; ++guard) {
    const int dx = move.first - x, dy = move.second - y;
    length += (dx != 0 && dy != 0) ? std::numbers::sqrt2 : 1.0;
    // Backtrack: the neighbour scanned just before `move`, expressed from the new pixel.
    const int d = direction_index(dx, dy);
    const int prev_d = (d + 7) % 8;
    const int bx = x + kMoore[static_cast<std::size_t>(prev_d)].dx, by = y + kMoore[static_cast<std::size_t>(prev_d)].dy;
    x = move.first;
    y = move.second;
    back = direction_index(std::clamp(bx - x, -1, 1), std::clamp(by - y, -1, 1));
    auto n = next(x, y, back);
    if (!n) break;
    if (x == sx && y == sy && *n == first_move) break;
    move = *n;
  }
  return length;
}

void decompose_shapes(const BinaryMask& comp, const DecomposeParams& params, std::vector<Primitive>& out) {
  const double mpp = params.meters_per_pixel;
  if (isoperimetric_ratio(comp) > params.circularity) {
    out.push_back(fit_circle(comp, mpp));
    return;
  }
  // Look for a round core that survives an opening wider than the attached arms.
  const auto dt = distance_transform(comp);
  const float r_inscribed = min_max(dt).second;
  const int rho = static_cast<int>(std::floor(0.8 * r_inscribed));
  if (rho >= 3) {
    const auto se = StructuringElement::disk(rho);
    const BinaryMask core = dilate(erode(comp, se), se);
    const double area = static_cast<double>(comp.count());
    for (const auto& k : split_components(mask_and(core, comp), params.min_area)) {
      const PixelStats ks = stats(k);
      // Chain-code perimeters overstate small digital disks, so the disk IoU does the real test.
      if (ks.area < 0.25 * area || isoperimetric_ratio(k) <= 0.8) continue;
      const double r = std::sqrt(ks.area / kPi);
      if (iou(k, render_disk(k.width(), k.height(), ks.cx, ks.cy, r)) < 0.88) continue;
      out.push_back(CirclePrimitive{to_meters(ks.cx, ks.cy, mpp), r * mpp});
      const BinaryMask rest = mask_minus(comp, render_disk(k.width(), k.height(), ks.cx, ks.cy, r + 1.5));
      for (const auto& arm : split_components(rest, params.min_area)) out.push_back(fit_rectangle(arm, mpp));
      return;
    }
  }
  out.push_back(fit_rectangle(comp, mpp));
}

void decompose_skeleton(const BinaryMask& comp, const DecomposeParams& params, std::vector<Primitive>& out) {
  const double mpp = params.meters_per_pixel;
  BinaryMask skel = skeletonize(comp, params.prune_spurs);
  const int w = skel.width(), h = skel.height();

  // Cycles enclose holes of the skeleton; each becomes a circle and absorbs the pixels on it.
  const BinaryMask holes = mask_minus(fill_holes(skel), skel);
  for (const auto& hole : split_components(holes, 4)) {
    const PixelStats hs = stats(hole);
    const double r = std::sqrt(hs.area / kPi) + 0.5;
    out.push_back(CirclePrimitive{to_meters(hs.cx, hs.cy, mpp), r * mpp});
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (skel(x, y) && std::abs(std::hypot(x - hs.cx, y - hs.cy) - r) <= 2.0) skel.set(x, y, false);
      }
    }
  }

  // Branch points: skeleton pixels with three or more skeleton neighbours, clustered.
  BinaryMask junction(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (skel(x, y) && neighbour_count(skel, x, y) >= 3) junction.set(x, y);
  const BinaryMask junction_zone = dilate(junction, StructuringElement::square(1));
  const Components clusters = connected_components(junction_zone, Connectivity::eight);
  std::vector<PixelStats> cluster_center(static_cast<std::size_t>(clusters.count) + 1);
  {
    std::vector<BinaryMask> parts(static_cast<std::size_t>(clusters.count) + 1, BinaryMask(w, h));
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (junction(x, y)) parts[static_cast<std::size_t>(clusters.labels(x, y))].set(x, y);
    for (int c = 1; c <= clusters.count; ++c) cluster_center[static_cast<std::size_t>(c)] = stats(parts[static_cast<std::size_t>(c)]);
  }

  const BinaryMask branches = mask_minus(skel, junction_zone);
  for (const auto& branch : split_components(branches, 2)) {
    // Ends of the branch path: pixels with at most one branch neighbour.
    std::vector<std::pair<int, int>> ends;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (branch(x, y) && neighbour_count(branch, x, y) <= 1) ends.emplace_back(x, y);
    if (ends.size() < 2) {
      // Closed loop without a junction.
      const PixelStats bs = stats(branch);
      double rsum = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (branch(x, y)) rsum += std::hypot(x - bs.cx, y - bs.cy);
      if (bs.area > 0 && ends.empty()) {
        out.push_back(CirclePrimitive{to_meters(bs.cx, bs.cy, mpp), rsum / bs.area * mpp});
        continue;
      }
      if (ends.empty()) continue;
      ends.push_back(ends.front());
    }
    // Farthest pair of end candidates.
    std::pair<int, int> pa = ends[0], pb = ends[1];
    double best = -1.0;
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        const double d = std::hypot(ends[i].first - ends[j].first, ends[i].second - ends[j].second);
        if (d > best) {
          best = d;
          pa = ends[i];
          pb = ends[j];
        }
      }
    auto snap = [&](std::pair<int, int> e) -> Point2 {
      // An end touching a junction cluster extends to the cluster center.
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = e.first + dx, ny = e.second + dy;
          if (junction_zone.get(nx, ny) && skel.get(nx, ny)) {
            const auto& c = cluster_center[static_cast<std::size_t>(clusters.labels(nx, ny))];
            return to_meters(c.cx, c.cy, mpp);
          }
        }
      return to_meters(e.first, e.second, mpp);
    };
    SegmentPrimitive seg{snap(pa), snap(pb)};
    if (seg.length() > 0.0) out.push_back(seg);
  }
  if (out.empty()) {
    const PixelStats s = stats(comp);
    out.push_back(SegmentPrimitive{to_meters(s.cx - 0.5, s.cy, mpp), to_meters(s.cx + 0.5, s.cy, mpp)});
  }
}

}  // namespace

double SegmentPrimitive::orientation() const { return map_bearing(b.x - a.x, b.y - a.y); }

PrimitiveKind kind_of(const Primitive& p) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RectanglePrimitive>) return PrimitiveKind::rectangle;
        else if constexpr (std::is_same_v<T, CirclePrimitive>) return PrimitiveKind::circle;
        else return PrimitiveKind::segment;
      },
      p);
}

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::rectangle: return "rectangle";
    case PrimitiveKind::circle: return "circle";
    case PrimitiveKind::segment: return "segment";
  }
  return "segment";
}

PrimitiveKind primitive_kind_from_string(std::string_view s) {
  if (s == "rectangle") return PrimitiveKind::rectangle;
  if (s == "circle") return PrimitiveKind::circle;
  if (s == "segment") return PrimitiveKind::segment;
  throw Error(ErrorCode::FormatError, "unknown primitive kind '" + std::string(s) + "'");
}

double map_bearing(double dx, double dy) {
  double a = std::atan2(-dy, dx);
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

Point2 center_of(const Primitive& p) {
  if (const auto* r = std::get_if<RectanglePrimitive>(&p)) return r->center;
  if (const auto* c = std::get_if<CirclePrimitive>(&p)) return c->center;
  const auto& s = std::get<SegmentPrimitive>(p);
  return {(s.a.x + s.b.x) / 2, (s.a.y + s.b.y) / 2};
}

double distance_to(const Primitive& p, Point2 q) {
  if (const auto* c = std::get_if<CirclePrimitive>(&p)) return std::max(0.0, distance(q, c->center) - c->radius);
  if (const auto* r = std::get_if<RectanglePrimitive>(&p)) {
    const Point2 u = axis(r->orientation);
    const double dx = q.x - r->center.x, dy = q.y - r->center.y;
    const double along = std::abs(dx * u.x + dy * u.y) - r->width / 2;
    const double across = std::abs(-dx * u.y + dy * u.x) - r->height / 2;
    return std::hypot(std::max(0.0, along), std::max(0.0, across));
  }
  const auto& s = std::get<SegmentPrimitive>(p);
  return point_segment_distance(q, s.a, s.b);
}

double distance_between(const Primitive& a, const Primitive& b) {
  double best = std::min(distance_to(b, center_of(a)), distance_to(a, center_of(b)));
  for (const auto& q : boundary_samples(a, 0.5)) best = std::min(best, distance_to(b, q));
  for (const auto& q : boundary_samples(b, 0.5)) best = std::min(best, distance_to(a, q));
  return best;
}

std::vector<Point2> ends_of(const Primitive& p) {
  if (const auto* r = std::get_if<RectanglePrimitive>(&p)) {
    const Point2 u = axis(r->orientation);
    return {{r->center.x - u.x * r->width / 2, r->center.y - u.y * r->width / 2},
            {r->center.x + u.x * r->width / 2, r->center.y + u.y * r->width / 2}};
  }
  if (const auto* s = std::get_if<SegmentPrimitive>(&p)) return {s->a, s->b};
  return {};
}

double isoperimetric_ratio(const BinaryMask& component) {
  const double area = static_cast<double>(component.count());
  if (area == 0) return 0.0;
  // The traced contour runs through boundary pixel centers; pi accounts for the half-pixel rim.
  const double perimeter = contour_length(component) + kPi;
  return 4.0 * kPi * area / (perimeter * perimeter);
}

CirclePrimitive fit_circle(const BinaryMask& component, double mpp) {
  const PixelStats s = stats(component);
  if (s.area == 0) throw Error(ErrorCode::EmptyMask, "circle fit on an empty component");
  return {to_meters(s.cx, s.cy, mpp), std::sqrt(s.area / kPi) * mpp};
}

RectanglePrimitive fit_rectangle(const BinaryMask& component, double mpp) {
  std::vector<std::pair<int, int>> px;
  for (int y = 0; y < component.height(); ++y)
    for (int x = 0; x < component.width(); ++x)
      if (component(x, y)) px.emplace_back(x, y);
  if (px.empty()) throw Error(ErrorCode::EmptyMask, "rectangle fit on an empty component");

  RectanglePrimitive best;
  double best_area = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 360; ++step) {
    const double theta = step * kPi / 360.0;
    const Point2 u = axis(theta);
    const Point2 v{-u.y, u.x};
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (auto [x, y] : px) {
      const double pu = x * u.x + y * u.y, pv = x * v.x + y * v.y;
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    const double pad = std::abs(u.x) + std::abs(u.y);
    const double eu = umax - umin + pad, ev = vmax - vmin + pad;
    if (eu * ev < best_area - 1e-9) {
      best_area = eu * ev;
      const double cu = (umin + umax) / 2, cv = (vmin + vmax) / 2;
      const Point2 c{cu * u.x + cv * v.x, cu * u.y + cv * v.y};
      best.center = to_meters(c.x, c.y, mpp);
      if (eu >= ev) {
        best.orientation = theta;
        best.width = eu * mpp;
        best.height = ev * mpp;
      } else {
        best.orientation = std::fmod(theta + kPi / 2, kPi);
        best.width = ev * mpp;
        best.height = eu * mpp;
      }
    }
  }
  return best;
}

std::vector<Primitive> decompose(const BinaryMask& mask, const DecomposeParams& params) {
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "nothing to decompose");
  std::vector<Primitive> out;
  for (const auto& comp : split_components(mask, params.min_area)) {
    if (params.mode == DecomposeMode::shapes) decompose_shapes(comp, params, out);
    else decompose_skeleton(comp, params, out);
  }
  return out;
}

}  // namespace carto
