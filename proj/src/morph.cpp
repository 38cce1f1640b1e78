#include "carto/morph.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace carto {
namespace {

constexpr std::array<Offset, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<Offset, 8> kN8{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
}

// Neighbours P2..P9 in Zhang-Suen order: N, NE, E, SE, S, SW, W, NW.
std::array<int, 8> ring(const BinaryMask& m, int x, int y) {
  return {m.get(x, y - 1), m.get(x + 1, y - 1), m.get(x + 1, y), m.get(x + 1, y + 1),
          m.get(x, y + 1), m.get(x - 1, y + 1), m.get(x - 1, y), m.get(x - 1, y - 1)};
}

// Yokoi connectivity number for 8-connected foreground; 1 exactly for simple points.
int yokoi8(const std::array<int, 8>& p) {
  // Start at E and go counter-clockwise: E, NE, N, NW, W, SW, S, SE.
  const std::array<int, 8> q{p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
  int c = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - q[static_cast<std::size_t>(k)];
    const int b = 1 - q[static_cast<std::size_t>((k + 1) % 8)];
    const int d = 1 - q[static_cast<std::size_t>((k + 2) % 8)];
    c += a - a * b * d;
  }
  return c;
}

bool zhang_suen_candidate(const std::array<int, 8>& p, int pass) {
  const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
  if (b < 2 || b > 6) return false;
  int a = 0;
  for (std::size_t k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1);
  if (a != 1) return false;
  // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
  if (pass == 0) return p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0;
  return p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0;
}

void prune(BinaryMask& skel, int max_len) {
  std::vector<std::pair<int, int>> ends;
  for (int y = 0; y < skel.height(); ++y)
    for (int x = 0; x < skel.width(); ++x)
      if (skel(x, y) && neighbour_count(skel, x, y) == 1) ends.emplace_back(x, y);

  for (auto [x, y] : ends) {
    std::vector<std::pair<int, int>> branch{{x, y}};
    BinaryMask seen(skel.width(), skel.height());
    seen.set(x, y);
    bool reached_junction = false;
    while (static_cast<int>(branch.size()) <= max_len) {
      auto [cx, cy] = branch.back();
      std::vector<std::pair<int, int>> next;
      for (auto o : kN8) {
        const int nx = cx + o.dx, ny = cy + o.dy;
        if (skel.get(nx, ny) && !seen(nx, ny)) next.emplace_back(nx, ny);
      }
      if (next.size() != 1 || neighbour_count(skel, next[0].first, next[0].second) > 2) {
        reached_junction = !next.empty();
        break;
      }
      seen.set(next[0].first, next[0].second);
      branch.push_back(next[0]);
    }
    if (reached_junction && static_cast<int>(branch.size()) < max_len) {
      for (auto [bx, by] : branch) skel.set(bx, by, false);
    }
  }
}

}  // namespace

std::vector<Offset> StructuringElement::offsets() const {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "structuring element radius must be >= 1");
  std::vector<Offset> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (shape == Shape::square || dx * dx + dy * dy <= radius * radius) out.push_back({dx, dy});
    }
  }
  return out;
}

int neighbour_count(const BinaryMask& mask, int x, int y) {
  int n = 0;
  for (auto o : kN8) n += mask.get(x + o.dx, y + o.dy);
  return n;
}

Components connected_components(const BinaryMask& mask, Connectivity conn) {
  Components out{Image<int>(mask.width(), mask.height(), 1.0, 0), 0};
  const auto neighbours = conn == Connectivity::eight ? std::span<const Offset>(kN8) : std::span<const Offset>(kN4);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y) != 0) continue;
      const int label = ++out.count;
      out.labels(x, y) = label;
      queue.emplace_back(x, y);
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        for (auto o : neighbours) {
          const int nx = cx + o.dx, ny = cy + o.dy;
          if (mask.get(nx, ny) && out.labels(nx, ny) == 0) {
            out.labels(nx, ny) = label;
            queue.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  const auto offsets = se.offsets();
  BinaryMask out(mask.width(), mask.height());
  const int w = mask.width();
  const int h = mask.height();
  const auto src = mask.bits();
  auto dst = out.bits();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t on = 0;
      for (const auto& o : offsets) {
        const int sx = x - o.dx, sy = y - o.dy;
        if (sx >= 0 && sy >= 0 && sx < w && sy < h && src[static_cast<std::size_t>(sy) * w + sx]) {
          on = 1;
          break;
        }
      }
      dst[static_cast<std::size_t>(y) * w + x] = on;
    }
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const auto offsets = se.offsets();
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      bool keep = true;
      for (const auto& o : offsets) {
        if (!mask.get(x + o.dx, y + o.dy)) {
          keep = false;
          break;
        }
      }
      out.set(x, y, keep);
    }
  }
  return out;
}

Image<float> distance_transform(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  constexpr int kBig = 1 << 28;
  Image<int> d(w, h, 1.0, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) d(x, y) = mask(x, y) ? kBig : 0;
  auto relax = [&](int x, int y, int dx, int dy, int cost) {
    const int nx = x + dx, ny = y + dy;
    const int base = mask.contains(nx, ny) ? d(nx, ny) : 0;
    d(x, y) = std::min(d(x, y), base + cost);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!d(x, y)) continue;
      relax(x, y, -1, 0, 3);
      relax(x, y, 0, -1, 3);
      relax(x, y, -1, -1, 4);
      relax(x, y, 1, -1, 4);
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      if (!d(x, y)) continue;
      relax(x, y, 1, 0, 3);
      relax(x, y, 0, 1, 3);
      relax(x, y, 1, 1, 4);
      relax(x, y, -1, 1, 4);
    }
  }
  Image<float> out(w, h, 1.0, 0.0f);
  for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = static_cast<float>(d.pixels()[i]) / 3.0f;
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  BinaryMask outside(mask.width(), mask.height());
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int x, int y) {
    if (!mask(x, y) && !outside(x, y)) {
      outside.set(x, y);
      queue.emplace_back(x, y);
    }
  };
  for (int x = 0; x < mask.width(); ++x) {
    seed(x, 0);
    seed(x, mask.height() - 1);
  }
  for (int y = 0; y < mask.height(); ++y) {
    seed(0, y);
    seed(mask.width() - 1, y);
  }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (auto o : kN4) {
      const int nx = x + o.dx, ny = y + o.dy;
      if (mask.contains(nx, ny)) seed(nx, ny);
    }
  }
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.bits()[i] = outside.bits()[i] ? 0 : 1;
  return out;
}

BinaryMask external_boundary(const BinaryMask& mask, const StructuringElement& se) {
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "external boundary of an empty mask");
  const BinaryMask body = fill_holes(dilate(mask, se));
  return mask_minus(dilate(body, StructuringElement::square(1)), body);
}

BinaryMask skeletonize(const BinaryMask& mask, int prune_spurs) {
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "skeleton of an empty mask");
  BinaryMask skel = mask;
  std::vector<std::pair<int, int>> candidates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      candidates.clear();
      for (int y = 0; y < skel.height(); ++y)
        for (int x = 0; x < skel.width(); ++x)
          if (skel(x, y) && zhang_suen_candidate(ring(skel, x, y), pass)) candidates.emplace_back(x, y);
      for (auto [x, y] : candidates) {
        const auto p = ring(skel, x, y);
        const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
        if (b >= 2 && yokoi8(p) == 1) {
          skel.set(x, y, false);
          changed = true;
        }
      }
    }
  }
  if (prune_spurs > 0) prune(skel, prune_spurs);
  return skel;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.bits()[i] = a.bits()[i] & b.bits()[i];
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.bits()[i] = a.bits()[i] | b.bits()[i];
  return out;
}

BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.bits()[i] = a.bits()[i] & (1 - b.bits()[i]);
  return out;
}

}  // namespace carto
