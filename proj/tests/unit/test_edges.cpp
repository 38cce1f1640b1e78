#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "carto/edges.hpp"
#include "carto/serialize.hpp"
#include "oracles.hpp"

using namespace carto;

namespace {

ScalarImage vertical_step(int size, int column, float lo, float hi) {
  ScalarImage img(size, size, 1.0, lo);
  for (int y = 0; y < size; ++y)
    for (int x = column; x < size; ++x) img(x, y) = hi;
  return img;
}

EdgeChain line_chain(Point2 a, Point2 b, int n) {
  EdgeChain c;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    c.points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  return c;
}

double total_length(const EdgeSet& e) {
  double s = 0.0;
  for (const auto& c : e.chains) s += c.arc_length();
  return s;
}

}  // namespace

TEST_CASE("constant image has no edges") {
  const auto e = canny(ScalarImage(32, 32, 1.0, 90.0f));
  CHECK(e.chains.empty());
  CHECK(e.width == 32);
}

TEST_CASE("vertical step gives one chain along the step") {
  const auto e = canny(vertical_step(32, 16, 0.0f, 100.0f));
  REQUIRE(e.chains.size() == 1);
  double ymin = 1e9, ymax = -1e9;
  for (const auto& p : e.chains[0].points) {
    CHECK(std::abs(p.x - 15.5) <= 1.0);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  CHECK(ymax - ymin + 1 >= 28);
}

TEST_CASE("two parallel steps give two chains") {
  ScalarImage img(40, 32, 1.0, 0.0f);
  for (int y = 0; y < 32; ++y)
    for (int x = 12; x < 28; ++x) img(x, y) = 100.0f;
  const auto e = canny(img);
  CHECK(e.chains.size() == 2);
}

TEST_CASE("fixed thresholds and the percentile rule") {
  const auto g = smoothed_gradient(vertical_step(24, 12, 0.0f, 50.0f), 1.0);
  const auto t = percentile_thresholds(g.magnitude, 0.9, 0.4);
  CHECK(t.t_low == doctest::Approx(0.4 * t.t_high));
  CannyParams p;
  p.thresholds = ThresholdPair{1e6, 1e5};
  CHECK(canny(vertical_step(24, 12, 0.0f, 50.0f), p).chains.empty());
}

TEST_CASE("edge pixels are at or above the low threshold") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto img = oracle::random_image(24, 24, rng);
    const auto g = smoothed_gradient(img, 1.5);
    const auto t = percentile_thresholds(g.magnitude, 0.9, 0.4);
    const auto px = canny_pixels(g, t);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        if (px(x, y)) CHECK(g.magnitude(x, y) >= t.t_low);
  }
}

TEST_CASE("refinement smooths interior points and keeps endpoints") {
  EdgeSet e;
  e.width = e.height = 20;
  EdgeChain c;
  for (int i = 0; i < 12; ++i) c.points.push_back({static_cast<double>(i), i % 2 ? 1.0 : 0.0});
  e.chains.push_back(c);
  RefineParams p;
  p.min_len = 0.0;
  p.merge_dist = 0.0;
  const auto r = refine_edges(e, p);
  REQUIRE(r.chains.size() == 1);
  CHECK(r.chains[0].points.front() == c.points.front());
  CHECK(r.chains[0].points.back() == c.points.back());
  CHECK(r.chains[0].points[5].y == doctest::Approx(1.0 / 3.0));
  CHECK(r.chains[0].arc_length() < c.arc_length());
}

TEST_CASE("refinement merges across a small gap and prunes short chains") {
  EdgeSet e;
  e.width = e.height = 40;
  e.chains.push_back(line_chain({0, 5}, {10, 5}, 11));
  e.chains.push_back(line_chain({12, 5}, {22, 5}, 11));
  e.chains.push_back(line_chain({30, 30}, {33, 30}, 4));
  const auto r = refine_edges(e, {3.0, 10.0, 3});
  REQUIRE(r.chains.size() == 1);
  CHECK(r.chains[0].points.size() == 22);
  CHECK(r.chains[0].arc_length() == doctest::Approx(22.0));
  CHECK_THROWS_AS(refine_edges(e, {-1.0, 10.0, 3}), Error);
}

TEST_CASE("refinement never adds chains and merges add bounded length") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int trial = 0; trial < 50; ++trial) {
    EdgeSet e;
    e.width = e.height = 30;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) e.chains.push_back(line_chain({u(rng), u(rng)}, {u(rng), u(rng)}, 8));
    RefineParams p{4.0, 0.0, 1};  // no smoothing or pruning: length changes come from merges only
    const auto r = refine_edges(e, p);
    CHECK(r.chains.size() <= e.chains.size());
    const auto merges = static_cast<double>(e.chains.size() - r.chains.size());
    CHECK(total_length(r) <= total_length(e) + merges * p.merge_dist + 1e-9);
    CHECK(total_length(r) >= total_length(e) - 1e-9);
    p.min_len = 10.0;
    for (const auto& c : refine_edges(e, p).chains) CHECK(c.arc_length() >= 10.0);
  }
}

TEST_CASE("rasterized chains are 8-connected") {
  EdgeSet e;
  e.chains.push_back(line_chain({1, 1}, {17, 9}, 3));
  const auto m = rasterize(e, 20, 12);
  CHECK(m(1, 1));
  CHECK(m(17, 9));
  CHECK(oracle::count_components8(m) == 1);
}

TEST_CASE("dark-side rasterization puts step edges on the darker column") {
  // A chain midway between columns 15 and 16 rounds onto either; the darker flank is fixed by polarity.
  EdgeSet e;
  e.chains.push_back(line_chain({15.5, 2}, {15.5, 29}, 28));
  const auto rising = rasterize_dark_side(e, vertical_step(32, 16, 0.0f, 100.0f), 1.0);
  const auto falling = rasterize_dark_side(e, vertical_step(32, 16, 100.0f, 0.0f), 1.0);
  for (int y = 2; y <= 29; ++y) {
    CHECK(rising(15, y));
    CHECK_FALSE(rising(16, y));
    CHECK(falling(16, y));
    CHECK_FALSE(falling(15, y));
  }
  CHECK(rising.count() == 28);
  CHECK(falling.count() == 28);
  // Zero-gradient regions leave vertices where plain rounding puts them.
  CHECK(rasterize_dark_side(e, ScalarImage(32, 32, 1.0, 7.0f), 1.0) == rasterize(e, 32, 32));
}

TEST_CASE("edge set JSON round trip") {
  const auto e = canny(vertical_step(32, 16, 0.0f, 100.0f));
  const auto back = edges_from_json(to_json(e));
  CHECK(back.width == e.width);
  REQUIRE(back.chains.size() == e.chains.size());
  CHECK(back.chains[0].points == e.chains[0].points);
  CHECK(back.chains[0].closed == e.chains[0].closed);
}
