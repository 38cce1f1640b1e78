#include <doctest.h>

#include <cmath>
#include <limits>

#include "carto/match.hpp"
#include "oracles.hpp"

using namespace carto;

namespace {

struct Recount {
  long score = 0;
  double variance = 0.0;
};

// Materialize translate, dilate pixel by pixel, intersect, and take a two-pass variance.
Recount recount(const BinaryMask& mask, const BinaryMask& edges, const ScalarImage& pan, Offset o,
                const StructuringElement& se) {
  const BinaryMask shifted = translate(mask, o);
  Recount r;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!edges(x, y)) continue;
      bool inside = false;
      for (const auto& s : se.offsets()) inside = inside || shifted.get(x - s.dx, y - s.dy);
      r.score += inside;
    }
  std::vector<double> values;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (shifted(x, y)) values.push_back(pan(x, y));
  if (values.empty()) {
    r.variance = std::numeric_limits<double>::infinity();
    return r;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  for (double v : values) r.variance += (v - mean) * (v - mean);
  r.variance /= static_cast<double>(values.size());
  return r;
}

BinaryMask column(int w, int h, int x, int y0, int y1) { return oracle::filled_rect(w, h, x, y0, x, y1); }

// Textured pan, a blob mask, and edges on the one-pixel outer rim of the blob at `truth`.
// Scoring with disk(1) covers the whole rim except its corners only at the true offset.
struct Scene {
  BinaryMask mask;
  BinaryMask edges;
  ScalarImage pan;
};

Scene blob_scene(Offset truth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scene s;
  s.mask = oracle::filled_rect(60, 60, 22, 18, 36, 40);
  for (int y = 26; y < 32; ++y)
    for (int x = 37; x < 45; ++x) s.mask.set(x, y);
  const BinaryMask placed = translate(s.mask, truth);
  s.edges = mask_minus(dilate(placed, StructuringElement::square(1)), placed);
  s.pan = oracle::random_image(60, 60, rng);
  return s;
}

}  // namespace

TEST_CASE("edges on the rim of the unshifted mask give the zero offset uniquely") {
  const auto s = blob_scene({0, 0}, 41);
  const auto r = match_mask(s.mask, s.edges, s.pan, {10, StructuringElement::disk(1)});
  CHECK(r.offset == Offset{0, 0});
  CHECK(r.tie_count == 1);
  CHECK(r.score == recount(s.mask, s.edges, s.pan, {0, 0}, StructuringElement::disk(1)).score);
  CHECK(r.score > static_cast<long>(s.edges.count()) - 12);
  CHECK_FALSE(r.no_edges);
}

TEST_CASE("a displaced rim is recovered and its score equals a recount") {
  const auto s = blob_scene({3, -2}, 42);
  const MatchParams p{10, StructuringElement::disk(1)};
  const auto r = match_mask(s.mask, s.edges, s.pan, p);
  CHECK(r.offset == Offset{3, -2});
  const auto rc = recount(s.mask, s.edges, s.pan, r.offset, p.se);
  CHECK(r.score == rc.score);
  CHECK(r.variance == doctest::Approx(rc.variance).epsilon(1e-9));
}

TEST_CASE("symmetric tie resolves lexicographically on a uniform pan") {
  const auto mask = column(21, 21, 10, 5, 15);
  const auto edges = mask_or(column(21, 21, 7, 5, 15), column(21, 21, 13, 5, 15));
  const ScalarImage pan(21, 21, 1.0, 100.0f);
  const auto r = match_mask(mask, edges, pan, {1, StructuringElement::disk(2)});
  CHECK(r.offset == Offset{-1, 0});
  CHECK(r.tie_count == 2);
  CHECK(r.score == 11);
}

TEST_CASE("variance breaks a score tie before the lexicographic rule") {
  const auto mask = column(21, 21, 10, 5, 15);
  const auto edges = mask_or(column(21, 21, 7, 5, 15), column(21, 21, 13, 5, 15));
  ScalarImage pan(21, 21, 1.0, 100.0f);
  for (int y = 0; y < 21; ++y) pan(9, y) = static_cast<float>(y * 7 % 11);
  const auto r = match_mask(mask, edges, pan, {1, StructuringElement::disk(2)});
  CHECK(r.offset == Offset{1, 0});
  CHECK(r.variance == 0.0);
}

TEST_CASE("every candidate score and variance equals the brute force recount") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const auto mask = oracle::random_mask(24, 20, rng, 0.3);
    const auto edges = oracle::random_mask(24, 20, rng, 0.2);
    const auto pan = oracle::random_image(24, 20, rng);
    const MatchParams p{4, StructuringElement::disk(2)};
    const auto cands = score_offsets(mask, edges, pan, p);
    REQUIRE(cands.size() == 81);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const Offset o{static_cast<int>(k % 9) - 4, static_cast<int>(k / 9) - 4};
      CHECK(cands[k].offset == o);
      const auto rc = recount(mask, edges, pan, o, p.se);
      CHECK(cands[k].score == rc.score);
      CHECK(cands[k].variance == doctest::Approx(rc.variance).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("the search evaluates (2 hw + 1)^2 candidates") {
  const auto s = blob_scene({0, 0}, 44);
  for (int hw : {0, 1, 5, 10}) CHECK(score_offsets(s.mask, s.edges, s.pan, {hw, StructuringElement::disk(2)}).size() == static_cast<std::size_t>((2 * hw + 1) * (2 * hw + 1)));
}

TEST_CASE("translation equivariance") {
  const auto s = blob_scene({1, 2}, 45);
  const MatchParams p{10, StructuringElement::disk(1)};
  const Offset base = match_mask(s.mask, s.edges, s.pan, p).offset;
  CHECK(base == Offset{1, 2});
  for (const Offset t : {Offset{2, -3}, Offset{-4, 1}, Offset{0, 5}}) {
    // Moving the mask by t moves the answer by -t.
    const auto moved_mask = match_mask(translate(s.mask, t), s.edges, s.pan, p).offset;
    CHECK(moved_mask == Offset{base.dx - t.dx, base.dy - t.dy});
    // Moving the edges and pan by t moves the answer by +t.
    const auto moved_scene = match_mask(s.mask, translate(s.edges, t), translate(s.pan, t), p).offset;
    CHECK(moved_scene == Offset{base.dx + t.dx, base.dy + t.dy});
  }
}

TEST_CASE("empty inputs") {
  const ScalarImage pan(10, 10, 1.0, 0.0f);
  CHECK_THROWS_AS(match_mask(BinaryMask(10, 10), BinaryMask(10, 10), pan), Error);
  try {
    match_mask(BinaryMask(10, 10), BinaryMask(10, 10), pan);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMask);
  }
  const auto r = match_mask(oracle::filled_rect(10, 10, 3, 3, 5, 5), BinaryMask(10, 10), pan);
  CHECK(r.no_edges);
  CHECK(r.offset == Offset{0, 0});
  CHECK_THROWS_AS(match_mask(BinaryMask(9, 10), BinaryMask(10, 10), pan), Error);
}
