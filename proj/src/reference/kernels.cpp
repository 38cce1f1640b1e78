#include "carto/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carto::reference {

ScalarImage magnify(const ScalarImage& img, int factor) {
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "magnification factor must be >= 1");
  ScalarImage out(img.width() * factor, img.height() * factor, img.resolution() / factor);
  for (int oy = 0; oy < out.height(); ++oy) {
    for (int ox = 0; ox < out.width(); ++ox) {
      // Source position of the output pixel center, clamped to the outer pixel centers.
      const double sx = std::clamp((ox + 0.5) / factor - 0.5, 0.0, img.width() - 1.0);
      const double sy = std::clamp((oy + 0.5) / factor - 0.5, 0.0, img.height() - 1.0);
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      double acc = 0.0;
      for (int j = 0; j <= 1; ++j) {
        for (int i = 0; i <= 1; ++i) {
          const double wgt = (i ? fx : 1 - fx) * (j ? fy : 1 - fy);
          if (wgt != 0.0) acc += wgt * img.at_clamped(x0 + i, y0 + j);
        }
      }
      out(ox, oy) = static_cast<float>(acc);
    }
  }
  return out;
}

ScalarImage band_combine(const MultiSpectralImage& ms, const BandWeights& weights) {
  ScalarImage out(ms.width(), ms.height(), ms.resolution());
  for (int y = 0; y < ms.height(); ++y) {
    for (int x = 0; x < ms.width(); ++x) {
      const double v = weights.ch1 * ms.channel(0)(x, y) + weights.ch2 * ms.channel(1)(x, y) +
                       weights.ch3 * ms.channel(2)(x, y);
      out(x, y) = static_cast<float>(v);
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  BinaryMask out(mask.width(), mask.height());
  for (const auto& o : se.offsets()) {
    const BinaryMask shifted = translate(mask, o);
    for (std::size_t i = 0; i < out.size(); ++i) out.bits()[i] |= shifted.bits()[i];
  }
  return out;
}

ScalarImage gaussian_blur(const ScalarImage& img, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> g;
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    g.push_back(std::exp(-(i * i) / (2.0 * sigma * sigma)));
    total += g.back();
  }
  ScalarImage out(img.width(), img.height(), img.resolution());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i)
          acc += g[static_cast<std::size_t>(i + r)] * g[static_cast<std::size_t>(j + r)] * img.at_clamped(x + i, y + j);
      out(x, y) = static_cast<float>(acc / (total * total));
    }
  }
  return out;
}

ScalarImage gradient_magnitude(const ScalarImage& img) {
  static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  ScalarImage out(img.width(), img.height(), img.resolution());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double gx = 0.0, gy = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          const double v = img.at_clamped(x + i - 1, y + j - 1);
          gx += kx[j][i] * v;
          gy += kx[i][j] * v;
        }
      }
      out(x, y) = static_cast<float>(std::hypot(gx, gy));
    }
  }
  return out;
}

std::vector<MatchCandidate> score_offsets(const BinaryMask& mask, const BinaryMask& edge_pixels,
                                          const ScalarImage& pan, const MatchParams& params) {
  std::vector<MatchCandidate> out;
  const int hw = params.half_window;
  for (int dy = -hw; dy <= hw; ++dy) {
    for (int dx = -hw; dx <= hw; ++dx) {
      const BinaryMask shifted = translate(mask, {dx, dy});
      const BinaryMask grown = reference::dilate(shifted, params.se);
      MatchCandidate c{{dx, dy}, 0, 0.0};
      for (std::size_t i = 0; i < grown.size(); ++i) c.score += grown.bits()[i] & edge_pixels.bits()[i];
      std::vector<double> values;
      for (std::size_t i = 0; i < shifted.size(); ++i)
        if (shifted.bits()[i]) values.push_back(pan.pixels()[i]);
      if (values.empty()) {
        c.variance = std::numeric_limits<double>::infinity();
      } else {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        for (double v : values) c.variance += (v - mean) * (v - mean);
        c.variance /= static_cast<double>(values.size());
      }
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace carto::reference
