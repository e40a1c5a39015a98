// Copyright 2025 Google LLC
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>
#include <random>

#include "benchmark/benchmark.h"
#include "isomedian/filter_core.h"
#include "isomedian/oracle.h"
#include "isomedian/ordinal.h"
#include "isomedian/tiling.h"

namespace isomedian {
namespace {

template <PixelType T>
Image<T> Noise(int width, int height) {
  std::mt19937 rng(5);
  Image<T> image(width, height);
  if constexpr (std::is_same_v<T, float>) {
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (float& v : image.pixels()) v = dist(rng);
  } else {
    std::uniform_int_distribution<int> dist(0, std::numeric_limits<T>::max());
    for (T& v : image.pixels()) v = static_cast<T>(dist(rng));
  }
  return image;
}

template <PixelType T>
void BM_OrdinalTransform(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Image<T> tile = Noise<T>(side, side);
  for (auto _ : state) {
    auto result = OrdinalTransform(TileView<T>::Of(tile));
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_OrdinalTransform<uint8_t>)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_OrdinalTransform<uint16_t>)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_OrdinalTransform<float>)->Arg(64)->Arg(128)->Arg(256);

template <PixelType T>
void BM_FilterImage(benchmark::State& state) {
  const Image<T> image = Noise<T>(1024, 1024);
  FilterParams params;
  params.shape = ShapeSpec::Circle(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = FilterImage(image, params);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * 1024 * 1024);
}
BENCHMARK(BM_FilterImage<uint8_t>)
    ->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterImage<uint16_t>)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterImage<float>)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FilterImageSquare(benchmark::State& state) {
  const Image<uint8_t> image = Noise<uint8_t>(1024, 1024);
  FilterParams params;
  params.shape = ShapeSpec::Square(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = FilterImage(image, params);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * 1024 * 1024);
}
BENCHMARK(BM_FilterImageSquare)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ReferenceFilter(benchmark::State& state) {
  const Image<uint8_t> image = Noise<uint8_t>(256, 256);
  FilterParams params;
  params.shape = ShapeSpec::Circle(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = ReferenceFilter(image, params);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * 256 * 256);
}
BENCHMARK(BM_ReferenceFilter)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace isomedian

BENCHMARK_MAIN();
