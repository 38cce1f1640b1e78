#include "carto/match.hpp"

#include <limits>

namespace carto {
namespace {

void check_inputs(const BinaryMask& mask, const BinaryMask& edge_pixels, const ScalarImage& pan,
                  const MatchParams& params) {
  if (!mask.same_shape(pan) || !edge_pixels.same_shape(pan)) {
    throw Error(ErrorCode::DimensionMismatch, "mask, edges and pan must share dimensions");
  }
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "cannot match an empty mask");
  if (params.half_window < 0) throw Error(ErrorCode::InvalidArgument, "half window must be >= 0");
}

std::vector<std::pair<int, int>> set_pixels(const BinaryMask& m) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y)) out.emplace_back(x, y);
  return out;
}

}  // namespace

std::vector<MatchCandidate> score_offsets(const BinaryMask& mask, const BinaryMask& edge_pixels,
                                          const ScalarImage& pan, const MatchParams& params) {
  check_inputs(mask, edge_pixels, pan, params);
  const int hw = params.half_window;
  const int side = 2 * hw + 1;
  const auto se = params.se.offsets();
  const auto mask_px = set_pixels(mask);
  const auto edge_px = set_pixels(edge_pixels);
  const int w = mask.width(), h = mask.height();
  std::vector<MatchCandidate> out(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));

#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < side * side; ++k) {
    const Offset o{k % side - hw, k / side - hw};
    long score = 0;
    for (const auto& [ex, ey] : edge_px) {
      for (const auto& s : se) {
        // e lies in dilate(shift(mask)) iff some q = e - s is in frame and q - o is a mask pixel.
        const int qx = ex - s.dx, qy = ey - s.dy;
        if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
        if (mask.get(qx - o.dx, qy - o.dy)) {
          ++score;
          break;
        }
      }
    }
    double sum = 0.0, sum_sq = 0.0;
    long n = 0;
    for (const auto& [mx, my] : mask_px) {
      const int px = mx + o.dx, py = my + o.dy;
      if (px < 0 || py < 0 || px >= w || py >= h) continue;
      const double v = pan(px, py);
      sum += v;
      sum_sq += v * v;
      ++n;
    }
    double variance = std::numeric_limits<double>::infinity();
    if (n > 0) {
      const double mean = sum / static_cast<double>(n);
      variance = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    }
    out[static_cast<std::size_t>(k)] = {o, score, variance};
  }
  return out;
}

MatchResult select_best(const std::vector<MatchCandidate>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyInput, "no match candidates");
  const MatchCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    // Candidates are ordered by (dy, dx), so only strict improvements replace the incumbent.
    if (c.score > best->score || (c.score == best->score && c.variance < best->variance)) best = &c;
  }
  int ties = 0;
  for (const auto& c : candidates) ties += c.score == best->score;
  return {best->offset, best->score, best->variance, ties, false};
}

MatchResult match_mask(const BinaryMask& mask, const BinaryMask& edge_pixels, const ScalarImage& pan,
                       const MatchParams& params) {
  check_inputs(mask, edge_pixels, pan, params);
  if (!edge_pixels.any()) {
    const auto zero = score_offsets(mask, edge_pixels, pan, MatchParams{0, params.se});
    return {{0, 0}, 0, zero.front().variance, 1, true};
  }
  return select_best(score_offsets(mask, edge_pixels, pan, params));
}

MatchResult match_mask(const BinaryMask& mask, const EdgeSet& edges, const ScalarImage& pan,
                       const MatchParams& params) {
  return match_mask(mask, rasterize(edges, pan.width(), pan.height()), pan, params);
}

}  // namespace carto
