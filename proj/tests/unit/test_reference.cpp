#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "carto/edges.hpp"
#include "carto/reference.hpp"
#include "carto/watershed.hpp"
#include "oracles.hpp"

using namespace carto;

namespace {

void check_close(const ScalarImage& a, const ScalarImage& b, double tol) {
  REQUIRE(a.same_shape(b));
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a.pixels()[i] - b.pixels()[i]) <= tol * std::max(1.0f, std::abs(b.pixels()[i])));
}

template <typename F>
auto with_threads(int n, F&& fn) {
  const int before = omp_get_max_threads();
  omp_set_num_threads(n);
  auto out = fn();
  omp_set_num_threads(before);
  return out;
}

}  // namespace

TEST_CASE("magnification matches the reference exactly") {
  std::mt19937_64 rng(81);
  for (int factor : {1, 2, 4}) {
    const auto img = oracle::random_image(13, 9, rng);
    CHECK(magnify(img, factor) == reference::magnify(img, factor));
  }
}

TEST_CASE("band combination matches the reference") {
  std::mt19937_64 rng(82);
  const MultiSpectralImage ms(oracle::random_image(31, 17, rng), oracle::random_image(31, 17, rng),
                              oracle::random_image(31, 17, rng));
  check_close(band_combine(ms), reference::band_combine(ms), 1e-5);
}

TEST_CASE("dilation matches the reference exactly") {
  std::mt19937_64 rng(83);
  for (const auto se : {StructuringElement::disk(1), StructuringElement::disk(2), StructuringElement::disk(4),
                        StructuringElement::square(1), StructuringElement::square(3)}) {
    const auto m = oracle::random_mask(40, 33, rng, 0.05);
    CHECK(dilate(m, se) == reference::dilate(m, se));
  }
}

TEST_CASE("blur and gradient match the reference within float rounding") {
  std::mt19937_64 rng(84);
  const auto img = oracle::random_image(37, 29, rng);
  for (double sigma : {0.8, 1.5, 3.0}) {
    const auto fast = gaussian_blur(img, sigma), slow = reference::gaussian_blur(img, sigma);
    REQUIRE(fast.same_shape(slow));
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast.pixels()[i] - slow.pixels()[i]) <= 1e-3f);
  }
  const auto fast = gradient_magnitude(img), slow = reference::gradient_magnitude(img);
  for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast.pixels()[i] - slow.pixels()[i]) <= 1e-3f);
}

TEST_CASE("match scores match the reference") {
  std::mt19937_64 rng(85);
  for (int trial = 0; trial < 3; ++trial) {
    const auto mask = oracle::random_mask(48, 40, rng, 0.25);
    const auto edges = oracle::random_mask(48, 40, rng, 0.1);
    const auto pan = oracle::random_integer_image(48, 40, rng, 0, 255);
    const MatchParams p{6, StructuringElement::disk(2)};
    const auto fast = score_offsets(mask, edges, pan, p), slow = reference::score_offsets(mask, edges, pan, p);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k) {
      CHECK(fast[k].offset == slow[k].offset);
      CHECK(fast[k].score == slow[k].score);
      CHECK(fast[k].variance == doctest::Approx(slow[k].variance).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("parallel kernels do not depend on the thread count") {
  std::mt19937_64 rng(86);
  const auto img = oracle::random_image(64, 64, rng);
  const auto mask = oracle::random_mask(64, 64, rng, 0.2);
  const auto edges = oracle::random_mask(64, 64, rng, 0.1);
  CHECK(with_threads(1, [&] { return gaussian_blur(img, 1.5); }) == with_threads(4, [&] { return gaussian_blur(img, 1.5); }));
  CHECK(with_threads(1, [&] { return gradient_magnitude(img); }) == with_threads(4, [&] { return gradient_magnitude(img); }));
  CHECK(with_threads(1, [&] { return dilate(mask, StructuringElement::disk(3)); }) ==
        with_threads(4, [&] { return dilate(mask, StructuringElement::disk(3)); }));
  const auto one = with_threads(1, [&] { return match_mask(mask, edges, img); });
  const auto four = with_threads(4, [&] { return match_mask(mask, edges, img); });
  CHECK(one.offset == four.offset);
  CHECK(one.score == four.score);
  CHECK(one.variance == four.variance);
  CHECK(with_threads(1, [&] { return canny(img).chains.size(); }) == with_threads(4, [&] { return canny(img).chains.size(); }));
}
