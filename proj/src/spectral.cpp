#include "carto/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "carto/morph.hpp"

namespace carto {

ScalarImage band_combine(const MultiSpectralImage& ms, const BandWeights& weights) {
  ScalarImage out(ms.width(), ms.height(), ms.resolution());
  const auto c1 = ms.channel(0).pixels();
  const auto c2 = ms.channel(1).pixels();
  const auto c3 = ms.channel(2).pixels();
  auto dst = out.pixels();
  const auto n = static_cast<std::ptrdiff_t>(dst.size());
  const float w1 = static_cast<float>(weights.ch1);
  const float w2 = static_cast<float>(weights.ch2);
  const float w3 = static_cast<float>(weights.ch3);

#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = c1[i] * w1 + c2[i] * w2 + c3[i] * w3;
  return out;
}

ScalarImage threshold_image(const MultiSpectralImage& ms, const SpectralParams& params) {
  switch (params.source) {
    case ThresholdSource::combined: return band_combine(ms, params.weights);
    case ThresholdSource::ch1: return ms.channel(0);
    case ThresholdSource::ch2: return ms.channel(1);
    case ThresholdSource::ch3: return ms.channel(2);
  }
  return band_combine(ms, params.weights);
}

std::vector<float> central_window(const ScalarImage& img, int window) {
  const ScalarImage block = clip_center(img, window, window);
  return {block.pixels().begin(), block.pixels().end()};
}

ThresholdPair mode_threshold(std::span<const float> pooled_values, double delta) {
  if (pooled_values.empty()) throw Error(ErrorCode::EmptyCorpus, "no values to take a mode over");
  std::map<long, std::size_t> histogram;
  for (float v : pooled_values) ++histogram[std::lround(v)];
  // std::map iterates bins in ascending order, so strict '>' keeps the lower bin on ties.
  long best_bin = histogram.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [bin, count] : histogram) {
    if (count > best_count) {
      best_bin = bin;
      best_count = count;
    }
  }
  const double high = static_cast<double>(best_bin);
  return {high, high - delta};
}

ThresholdPair corpus_mode_threshold(std::span<const MultiSpectralImage> corpus, const SpectralParams& params) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "threshold estimation needs at least one image");
  std::vector<float> pooled;
  for (const auto& ms : corpus) {
    const auto values = central_window(threshold_image(ms, params), params.mode_window);
    pooled.insert(pooled.end(), values.begin(), values.end());
  }
  return mode_threshold(pooled, params.delta);
}

BinaryMask hysteresis_segment(const ScalarImage& img, const ThresholdPair& t) {
  if (t.t_low > t.t_high) throw Error(ErrorCode::InvalidArgument, "t_low must not exceed t_high");
  BinaryMask out(img.width(), img.height());
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img(x, y) >= t.t_high) {
        out.set(x, y);
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (!img.contains(nx, ny) || out(nx, ny) || img(nx, ny) < t.t_low) continue;
        out.set(nx, ny);
        queue.emplace_back(nx, ny);
      }
    }
  }
  return out;
}

BinaryMask keep_central_component(const BinaryMask& mask, int window) {
  const Components cc = connected_components(mask, Connectivity::eight);
  BinaryMask out(mask.width(), mask.height());
  if (cc.count == 0) return out;

  std::vector<std::size_t> overlap(static_cast<std::size_t>(cc.count) + 1, 0);
  const int x0 = (mask.width() - window + 1) / 2;
  const int y0 = (mask.height() - window + 1) / 2;
  for (int y = std::max(0, y0); y < std::min(mask.height(), y0 + window); ++y)
    for (int x = std::max(0, x0); x < std::min(mask.width(), x0 + window); ++x)
      ++overlap[static_cast<std::size_t>(cc.labels(x, y))];

  int best = 0;
  for (int label = 1; label <= cc.count; ++label) {
    if (overlap[static_cast<std::size_t>(label)] > (best ? overlap[static_cast<std::size_t>(best)] : 0)) best = label;
  }
  if (best == 0) {
    const double cx = (mask.width() - 1) / 2.0;
    const double cy = (mask.height() - 1) / 2.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        const int label = cc.labels(x, y);
        const double d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (label != 0 && d < best_d) {
          best_d = d;
          best = label;
        }
      }
    }
  }
  for (std::size_t i = 0; i < mask.size(); ++i) out.bits()[i] = cc.labels.pixels()[i] == best ? 1 : 0;
  return out;
}

}  // namespace carto
