#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "wgame/accuracy.hpp"
#include "wgame/coco.hpp"
#include "wgame/morphology.hpp"
#include "wgame/resample.hpp"
#include "wgame/stability.hpp"

namespace {

using namespace wgame;

SaliencyMap random_map(Dims dims, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(dims.area());
  for (auto& x : v) x = u(gen);
  return SaliencyMap(dims, std::move(v));
}

BinaryMask random_mask(Dims dims, double density, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution bit(density);
  std::vector<std::uint8_t> bits(dims.area());
  for (auto& b : bits) b = bit(gen);
  return BinaryMask(dims, std::move(bits));
}

Dims square(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  return {n, n};
}

void BM_Dilate(benchmark::State& state) {
  const auto mask = random_mask(square(state), 0.01, 1);
  const KernelSpec kernel(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(dilate(mask, kernel));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mask.size()));
}
BENCHMARK(BM_Dilate)->Args({224, 9})->Args({640, 9})->Args({640, 31});

void BM_WeightingGame(benchmark::State& state) {
  const auto map = random_map(square(state), 2);
  const auto mask = dilate(random_mask(square(state), 0.01, 3));
  for (auto _ : state) benchmark::DoNotOptimize(weighting_game(map, mask));
}
BENCHMARK(BM_WeightingGame)->Arg(224)->Arg(640);

void BM_EvaluateMask(benchmark::State& state) {
  const auto map = random_map(square(state), 4);
  const auto mask = random_mask(square(state), 0.02, 5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_mask(map, mask));
}
BENCHMARK(BM_EvaluateMask)->Arg(224)->Arg(640);

void BM_Spearman(benchmark::State& state) {
  const auto a = random_map(square(state), 6), b = random_map(square(state), 7);
  for (auto _ : state) benchmark::DoNotOptimize(spearman(a, b));
}
BENCHMARK(BM_Spearman)->Arg(56)->Arg(224);

void BM_BilinearResize(benchmark::State& state) {
  const auto map = random_map({7, 7}, 8);
  for (auto _ : state) benchmark::DoNotOptimize(bilinear_resize(map, square(state)));
}
BENCHMARK(BM_BilinearResize)->Arg(224)->Arg(640);

void BM_ApplyCrop(benchmark::State& state) {
  const auto map = random_map({224, 224}, 9);
  const auto crop = sample_crop(RngStream(42, 0), map.dims(), 0.75, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(apply_crop(map, crop));
}
BENCHMARK(BM_ApplyCrop);

void BM_RasterizePolygon(benchmark::State& state) {
  const std::vector<PolygonRing> rings{{100, 80, 520, 60, 600, 400, 300, 470, 90, 300}};
  for (auto _ : state) benchmark::DoNotOptimize(rasterize_polygon(rings, {480, 640}));
}
BENCHMARK(BM_RasterizePolygon);

}  // namespace

BENCHMARK_MAIN();
