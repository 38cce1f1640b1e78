#include <benchmark/benchmark.h>

#include <random>

#include "carto/edges.hpp"
#include "carto/match.hpp"
#include "carto/morph.hpp"
#include "carto/reference.hpp"
#include "carto/spectral.hpp"
#include "carto/watershed.hpp"

namespace {

using namespace carto;

ScalarImage noise_image(int size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 255.0f);
  ScalarImage img(size, size);
  for (auto& v : img.pixels()) v = u(rng);
  return img;
}

BinaryMask blob(int size, double radius) {
  BinaryMask m(size, size);
  const double c = (size - 1) / 2.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if ((x - c) * (x - c) + (y - c) * (y - c) <= radius * radius) m.set(x, y);
  return m;
}

struct MatchInputs {
  BinaryMask mask = blob(128, 30);
  BinaryMask edges = external_boundary(translate(blob(128, 30), {3, -2}), StructuringElement::square(1));
  ScalarImage pan = noise_image(128, 3);
};

void BM_Magnify(benchmark::State& st) {
  const auto img = noise_image(64, 1);
  for (auto _ : st) benchmark::DoNotOptimize(magnify(img, 4));
}
void BM_MagnifyReference(benchmark::State& st) {
  const auto img = noise_image(64, 1);
  for (auto _ : st) benchmark::DoNotOptimize(reference::magnify(img, 4));
}

void BM_BandCombine(benchmark::State& st) {
  const MultiSpectralImage ms(noise_image(512, 1), noise_image(512, 2), noise_image(512, 3));
  for (auto _ : st) benchmark::DoNotOptimize(band_combine(ms));
}
void BM_BandCombineReference(benchmark::State& st) {
  const MultiSpectralImage ms(noise_image(512, 1), noise_image(512, 2), noise_image(512, 3));
  for (auto _ : st) benchmark::DoNotOptimize(reference::band_combine(ms));
}

void BM_Dilate(benchmark::State& st) {
  const auto m = blob(256, 60);
  for (auto _ : st) benchmark::DoNotOptimize(dilate(m, StructuringElement::disk(3)));
}
void BM_DilateReference(benchmark::State& st) {
  const auto m = blob(256, 60);
  for (auto _ : st) benchmark::DoNotOptimize(reference::dilate(m, StructuringElement::disk(3)));
}

void BM_GaussianBlur(benchmark::State& st) {
  const auto img = noise_image(256, 4);
  for (auto _ : st) benchmark::DoNotOptimize(gaussian_blur(img, 1.5));
}
void BM_GaussianBlurReference(benchmark::State& st) {
  const auto img = noise_image(256, 4);
  for (auto _ : st) benchmark::DoNotOptimize(reference::gaussian_blur(img, 1.5));
}

void BM_GradientMagnitude(benchmark::State& st) {
  const auto img = noise_image(512, 5);
  for (auto _ : st) benchmark::DoNotOptimize(gradient_magnitude(img));
}
void BM_GradientMagnitudeReference(benchmark::State& st) {
  const auto img = noise_image(512, 5);
  for (auto _ : st) benchmark::DoNotOptimize(reference::gradient_magnitude(img));
}

void BM_MatchScores(benchmark::State& st) {
  const MatchInputs in;
  for (auto _ : st) benchmark::DoNotOptimize(score_offsets(in.mask, in.edges, in.pan, {}));
}
void BM_MatchScoresReference(benchmark::State& st) {
  const MatchInputs in;
  for (auto _ : st) benchmark::DoNotOptimize(reference::score_offsets(in.mask, in.edges, in.pan, {}));
}

}  // namespace

BENCHMARK(BM_Magnify);
BENCHMARK(BM_MagnifyReference);
BENCHMARK(BM_BandCombine);
BENCHMARK(BM_BandCombineReference);
BENCHMARK(BM_Dilate);
BENCHMARK(BM_DilateReference);
BENCHMARK(BM_GaussianBlur);
BENCHMARK(BM_GaussianBlurReference);
BENCHMARK(BM_GradientMagnitude);
BENCHMARK(BM_GradientMagnitudeReference);
BENCHMARK(BM_MatchScores)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchScoresReference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
