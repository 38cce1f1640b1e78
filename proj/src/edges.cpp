#include "carto/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <tuple>

namespace carto {
namespace {

// Zhang-Suen style ring order N, NE, E, SE, S, SW, W, NW.
constexpr std::array<Offset, 8> kRing{{{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<std::size_t>(i + radius)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// 1 = chain end, 2 = chain interior, 3 = junction (or fully surrounded), 0 = isolated.
int pixel_kind(const BinaryMask& m, int x, int y) {
  int t = 0;
  int n = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto a = kRing[k];
    const auto b = kRing[(k + 1) % 8];
    t += !m.get(x + a.dx, y + a.dy) && m.get(x + b.dx, y + b.dy);
    n += m.get(x + a.dx, y + a.dy);
  }
  if (n == 0) return 0;
  return t == 0 ? 3 : std::min(t, 3);
}

using Pixel = std::pair<int, int>;

class Tracer {
 public:
  Tracer(const BinaryMask& pixels, const std::vector<Point2>& subpixel)
      : pixels_(pixels),
        subpixel_(subpixel),
        visited_(pixels.width(), pixels.height()),
        kind_(pixels.width(), pixels.height(), 1.0, 0) {
    for (int y = 0; y < pixels.height(); ++y)
      for (int x = 0; x < pixels.width(); ++x)
        if (pixels(x, y)) kind_(x, y) = pixel_kind(pixels, x, y);
  }

  EdgeSet run() {
    EdgeSet out;
    out.width = pixels_.width();
    out.height = pixels_.height();
    // Open chains grow from ends and junctions.
    for (int y = 0; y < pixels_.height(); ++y) {
      for (int x = 0; x < pixels_.width(); ++x) {
        if (!pixels_(x, y) || kind_(x, y) == 2) continue;
        if (junction({x, y})) {
          while (auto first = step({x, y}, {x, y}, true)) out.chains.push_back(chain(walk({x, y}, *first), false));
          continue;
        }
        if (visited_(x, y)) continue;
        visited_.set(x, y);
        if (auto first = step({x, y}, {x, y}, false)) out.chains.push_back(chain(walk({x, y}, *first), false));
      }
    }
    // The rest lies on cycles.
    for (int y = 0; y < pixels_.height(); ++y) {
      for (int x = 0; x < pixels_.width(); ++x) {
        if (!pixels_(x, y) || visited_(x, y) || junction({x, y})) continue;
        visited_.set(x, y);
        auto first = step({x, y}, {x, y}, false);
        if (!first) continue;
        auto path = walk({x, y}, *first);
        const auto [ex, ey] = path.back();
        const bool closed = path.size() >= 3 && std::max(std::abs(ex - x), std::abs(ey - y)) <= 1;
        out.chains.push_back(chain(path, closed));
      }
    }
    return out;
  }

 private:
  bool junction(Pixel p) const { return kind_(p.first, p.second) >= 3; }

  // Next pixel from `cur`, 4-neighbours before diagonals. Junctions are only entered
  // from non-junction pixels and never twice in a row.
  std::optional<Pixel> step(Pixel cur, Pixel start, bool from_junction) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = pass == 0 ? 0 : 1; k < 8; k += 2) {
        const Pixel n{cur.first + kRing[k].dx, cur.second + kRing[k].dy};
        if (!pixels_.get(n.first, n.second) || n == start) continue;
        if (junction(n)) {
          if (from_junction) continue;
          return n;
        }
        if (!visited_(n.first, n.second)) return n;
      }
    }
    return std::nullopt;
  }

  std::vector<Pixel> walk(Pixel start, Pixel first) {
    std::vector<Pixel> path{start, first};
    Pixel cur = first;
    while (!junction(cur)) {
      visited_.set(cur.first, cur.second);
      auto next = step(cur, path.size() < 3 ? start : Pixel{-1, -1}, false);
      if (!next) break;
      path.push_back(*next);
      cur = *next;
    }
    return path;
  }

  EdgeChain chain(const std::vector<Pixel>& path, bool closed) const {
    EdgeChain c;
    c.closed = closed;
    for (auto [x, y] : path) c.points.push_back(subpixel_[pixels_.index(x, y)]);
    return c;
  }

  const BinaryMask& pixels_;
  const std::vector<Point2>& subpixel_;
  BinaryMask visited_;
  Image<int> kind_;
};

EdgeSet trace_chains(const BinaryMask& pixels, const std::vector<Point2>& subpixel) {
  return Tracer(pixels, subpixel).run();
}

std::vector<Point2> smooth(const std::vector<Point2>& pts, int window, bool closed) {
  const int n = static_cast<int>(pts.size());
  const int half = window / 2;
  if (half < 1 || n < 3) return pts;
  std::vector<Point2> out = pts;
  for (int i = 0; i < n; ++i) {
    int h = half;
    if (!closed) {
      if (i == 0 || i == n - 1) continue;
      h = std::min({half, i, n - 1 - i});
    }
    double sx = 0.0, sy = 0.0;
    for (int k = -h; k <= h; ++k) {
      const auto& p = pts[static_cast<std::size_t>(((i + k) % n + n) % n)];
      sx += p.x;
      sy += p.y;
    }
    out[static_cast<std::size_t>(i)] = {sx / (2 * h + 1), sy / (2 * h + 1)};
  }
  return out;
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double EdgeChain::arc_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) len += distance(points[i - 1], points[i]);
  if (closed && points.size() > 2) len += distance(points.back(), points.front());
  return len;
}

std::size_t EdgeSet::point_count() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.points.size();
  return n;
}

ScalarImage gaussian_blur(const ScalarImage& img, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int w = img.width(), h = img.height();
  ScalarImage tmp(w, h, img.resolution());
  ScalarImage out(w, h, img.resolution());

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * img.at_clamped(x + i, y);
      tmp(x, y) = static_cast<float>(acc);
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * tmp.at_clamped(x, y + i);
      out(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

Gradient smoothed_gradient(const ScalarImage& img, double sigma) {
  const ScalarImage s = gaussian_blur(img, sigma);
  const int w = img.width(), h = img.height();
  Gradient g{ScalarImage(w, h, img.resolution()), ScalarImage(w, h, img.resolution()),
             ScalarImage(w, h, img.resolution())};
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float gx = 0.5f * (s.at_clamped(x + 1, y) - s.at_clamped(x - 1, y));
      const float gy = 0.5f * (s.at_clamped(x, y + 1) - s.at_clamped(x, y - 1));
      g.gx(x, y) = gx;
      g.gy(x, y) = gy;
      g.magnitude(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return g;
}

ThresholdPair percentile_thresholds(const ScalarImage& magnitude, double high_percentile, double low_ratio) {
  std::vector<float> nonzero;
  for (float m : magnitude.pixels())
    if (m > 0.0f) nonzero.push_back(m);
  if (nonzero.empty()) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  const auto rank = static_cast<std::size_t>(
      std::clamp(high_percentile, 0.0, 1.0) * static_cast<double>(nonzero.size() - 1));
  std::nth_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(rank), nonzero.end());
  const double high = nonzero[rank];
  return {high, low_ratio * high};
}

namespace {

// Step toward the brighter side along the quantized gradient direction.
Offset gradient_step(float gx, float gy) {
  constexpr double kPi = 3.14159265358979323846;
  double a = std::atan2(gy, gx);  // image coordinates, y down
  const int sector = static_cast<int>(std::lround(a / (kPi / 4.0)));
  switch ((sector % 8 + 8) % 8) {
    case 0: return {1, 0};
    case 1: return {1, 1};
    case 2: return {0, 1};
    case 3: return {-1, 1};
    case 4: return {-1, 0};
    case 5: return {-1, -1};
    case 6: return {0, -1};
    default: return {1, -1};
  }
}

// Relative slack so that mathematically equal magnitudes compare as ties.
bool clearly_greater(float a, float b) { return a > b + 1e-5f * std::max(a, b); }
bool not_less(float a, float b) { return a >= b - 1e-5f * std::max(a, b); }

}  // namespace

BinaryMask canny_pixels(const Gradient& g, const ThresholdPair& t) {
  const int w = g.magnitude.width(), h = g.magnitude.height();
  BinaryMask nms(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float m = g.magnitude(x, y);
      if (!(m >= t.t_low) || m <= 0.0f) continue;
      const Offset d = gradient_step(g.gx(x, y), g.gy(x, y));
      const float behind = g.magnitude.at_clamped(x - d.dx, y - d.dy);
      const float ahead = g.magnitude.at_clamped(x + d.dx, y + d.dy);
      // Plateaus across a step keep the pixel on the darker side.
      if (clearly_greater(m, behind) && not_less(m, ahead)) nms.set(x, y);
    }
  }
  BinaryMask out(w, h);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (nms(x, y) && g.magnitude(x, y) >= t.t_high) {
        out.set(x, y);
        queue.emplace_back(x, y);
      }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (auto o : kRing) {
      const int nx = x + o.dx, ny = y + o.dy;
      if (nms.get(nx, ny) && !out(nx, ny)) {
        out.set(nx, ny);
        queue.emplace_back(nx, ny);
      }
    }
  }
  return out;
}

EdgeSet canny(const ScalarImage& img, const CannyParams& params) {
  const Gradient g = smoothed_gradient(img, params.sigma);
  const ThresholdPair t =
      params.thresholds ? *params.thresholds
                        : percentile_thresholds(g.magnitude, params.high_percentile, params.low_ratio);
  const BinaryMask pixels = canny_pixels(g, t);

  std::vector<Point2> subpixel(pixels.size());
  for (int y = 0; y < pixels.height(); ++y) {
    for (int x = 0; x < pixels.width(); ++x) {
      if (!pixels(x, y)) continue;
      const Offset d = gradient_step(g.gx(x, y), g.gy(x, y));
      const double m0 = g.magnitude(x, y);
      const double mb = g.magnitude.at_clamped(x - d.dx, y - d.dy);
      const double ma = g.magnitude.at_clamped(x + d.dx, y + d.dy);
      const double denom = mb - 2.0 * m0 + ma;
      double shift = denom < 0.0 ? 0.5 * (mb - ma) / denom : 0.0;
      shift = std::clamp(shift, -0.49, 0.49);
      subpixel[pixels.index(x, y)] = {x + shift * d.dx, y + shift * d.dy};
    }
  }
  return trace_chains(pixels, subpixel);
}

EdgeSet refine_edges(const EdgeSet& edges, const RefineParams& params) {
  if (params.merge_dist < 0.0 || params.min_len < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "merge distance and minimum length must be non-negative");
  }
  std::vector<EdgeChain> chains;
  chains.reserve(edges.chains.size());
  for (const auto& c : edges.chains) chains.push_back({smooth(c.points, params.smooth_window, c.closed), c.closed});

  // Greedy nearest-pair-first endpoint merging, ties broken lexicographically on the endpoints.
  while (true) {
    using Key = std::tuple<double, Point2, Point2>;
    std::optional<Key> best;
    std::size_t best_a = 0, best_b = 0;
    bool a_tail = false, b_head = false;
    for (std::size_t a = 0; a < chains.size(); ++a) {
      if (chains[a].closed) continue;
      for (std::size_t b = a + 1; b < chains.size(); ++b) {
        if (chains[b].closed) continue;
        for (int ea = 0; ea < 2; ++ea) {
          for (int eb = 0; eb < 2; ++eb) {
            const Point2 pa = ea ? chains[a].points.back() : chains[a].points.front();
            const Point2 pb = eb ? chains[b].points.back() : chains[b].points.front();
            const double d = distance(pa, pb);
            if (d > params.merge_dist) continue;
            const Key key{d, std::min(pa, pb), std::max(pa, pb)};
            if (!best || key < *best) {
              best = key;
              best_a = a;
              best_b = b;
              a_tail = ea == 1;
              b_head = eb == 0;
            }
          }
        }
      }
    }
    if (!best) break;
    auto first = chains[best_a].points;
    auto second = chains[best_b].points;
    if (!a_tail) std::reverse(first.begin(), first.end());
    if (!b_head) std::reverse(second.begin(), second.end());
    // Orientation is fixed by geometry: start from the lexicographically smaller free end.
    first.insert(first.end(), second.begin(), second.end());
    if (first.back() < first.front()) std::reverse(first.begin(), first.end());
    chains[best_a] = {std::move(first), false};
    chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(best_b));
  }

  EdgeSet out;
  out.width = edges.width;
  out.height = edges.height;
  for (auto& c : chains)
    if (c.points.size() >= 2 && c.arc_length() >= params.min_len) out.chains.push_back(std::move(c));
  return out;
}

BinaryMask rasterize(const EdgeSet& edges, int width, int height) {
  BinaryMask out(width, height);
  auto plot = [&](int x, int y) {
    if (out.contains(x, y)) out.set(x, y);
  };
  auto line = [&](Point2 a, Point2 b) {
    int x0 = static_cast<int>(std::floor(a.x + 0.5)), y0 = static_cast<int>(std::floor(a.y + 0.5));
    const int x1 = static_cast<int>(std::floor(b.x + 0.5)), y1 = static_cast<int>(std::floor(b.y + 0.5));
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      plot(x0, y0);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  };
  for (const auto& c : edges.chains) {
    if (c.points.size() == 1) {
      line(c.points[0], c.points[0]);
      continue;
    }
    for (std::size_t i = 1; i < c.points.size(); ++i) line(c.points[i - 1], c.points[i]);
    if (c.closed && c.points.size() > 2) line(c.points.back(), c.points.front());
  }
  return out;
}

BinaryMask rasterize_dark_side(const EdgeSet& edges, const ScalarImage& img, double sigma) {
  const Gradient g = smoothed_gradient(img, sigma);
  EdgeSet shifted = edges;
  for (auto& c : shifted.chains) {
    for (auto& p : c.points) {
      const int x = std::clamp(static_cast<int>(std::floor(p.x + 0.5)), 0, img.width() - 1);
      const int y = std::clamp(static_cast<int>(std::floor(p.y + 0.5)), 0, img.height() - 1);
      const double gx = g.gx(x, y), gy = g.gy(x, y);
      const double n = std::hypot(gx, gy);
      if (n <= 0.0) continue;
      p.x -= 0.5 * gx / n;
      p.y -= 0.5 * gy / n;
    }
  }
  return rasterize(shifted, img.width(), img.height());
}

}  // namespace carto
