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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "isomedian/filter_core.h"
#include "isomedian/kernel_geometry.h"
#include "isomedian/oracle.h"
#include "isomedian/ordinal.h"
#include "isomedian/tiling.h"
#include "isomedian_tools/commands.h"
#include "test_util.h"

namespace isomedian {
namespace {

using testing::BinaryNoise;
using testing::CheckerboardWithBorder;
using testing::RandomImage;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

template <PixelType T>
std::vector<std::pair<std::string, Image<T>>> ExactnessCorpus(std::mt19937& rng) {
  std::vector<std::pair<std::string, Image<T>>> corpus;
  for (int i = 0; i < 10; ++i) {
    corpus.emplace_back(absl::StrCat("random#", i), RandomImage<T>(256, 256, rng));
  }
  corpus.emplace_back("binary noise", BinaryNoise<T>(256, 256, rng));
  corpus.emplace_back("constant", Image<T>(256, 256, 1, testing::MidValue<T>()));
  corpus.emplace_back("checkerboard", CheckerboardWithBorder<T>(256, 256, 48));
  return corpus;
}

template <PixelType T>
bool ExactnessForType(std::mt19937& rng, int& configs, std::string& failure) {
  const std::vector<double> percentiles = {0.0, 0.1, 0.5, 0.9, 1.0};
  for (const auto& [name, image] : ExactnessCorpus<T>(rng)) {
    for (const int r : {0, 1, 2, 3, 5, 8, 16, 32, 48}) {
      FilterParams params;
      params.shape = ShapeSpec::Circle(r);
      absl::StatusOr<std::vector<Image<T>>> expected =
          ReferenceFilterMulti(image, params, percentiles);
      if (!expected.ok()) {
        failure = std::string(expected.status().message());
        return false;
      }
      for (size_t k = 0; k < percentiles.size(); ++k) {
        params.percentile = percentiles[k];
        absl::StatusOr<Image<T>> fast = FilterImage(image, params);
        ++configs;
        if (!fast.ok() || !BitIdentical(*fast, (*expected)[k])) {
          failure = absl::StrCat(name, " r=", r, " p=", percentiles[k]);
          return false;
        }
      }
    }
  }
  return true;
}

Outcome Exactness() {
  std::mt19937 rng(1001);
  int configs = 0;
  std::string failure;
  const bool ok = ExactnessForType<uint8_t>(rng, configs, failure) &&
                  ExactnessForType<uint16_t>(rng, configs, failure) &&
                  ExactnessForType<float>(rng, configs, failure);
  if (!ok) return {false, absl::StrCat("mismatch at ", failure)};
  return {true, absl::StrCat(configs,
                             " type/image/radius/percentile configurations "
                             "byte-identical to the oracle")};
}

Outcome KernelArea() {
  absl::StatusOr<KernelShape> k = MakeKernel(ShapeSpec::Circle(2));
  const int area = k.ok() ? k->area() : -1;
  return {area == 21, absl::StrCat("circle r=2 area = ", area, " (expected 21)")};
}

template <PixelType T>
bool TileInvariantsHold(const Image<T>& image) {
  absl::StatusOr<OrdinalTile<T>> tile = OrdinalTransform(TileView<T>::Of(image));
  if (!tile.ok()) return false;
  const int n = image.width() * image.height();
  std::vector<char> seen(n, 0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const int v = tile->ordinal(x, y);
      if (v >= n || seen[v]) return false;
      seen[v] = 1;
      if (tile->omnigram()[v] != PackCoord(x, y)) return false;
      const T stored = tile->reverse_map()[v];
      const T original = image.at(x, y);
      if (std::memcmp(&stored, &original, sizeof(T)) != 0) return false;
    }
  }
  const auto key = [](T v) {
    if constexpr (std::is_same_v<T, float>) {
      return FloatOrderKey(v);
    } else {
      return static_cast<uint32_t>(v);
    }
  };
  for (int v = 1; v < n; ++v) {
    const uint32_t a = key(tile->reverse_map()[v - 1]);
    const uint32_t b = key(tile->reverse_map()[v]);
    if (a > b) return false;
    if (a == b) {
      const uint16_t pa = tile->omnigram()[v - 1];
      const uint16_t pb = tile->omnigram()[v];
      if (CoordY(pa) * 256 + CoordX(pa) > CoordY(pb) * 256 + CoordX(pb)) {
        return false;
      }
    }
  }
  return true;
}

Outcome OrdinalInvariants() {
  std::mt19937 rng(1003);
  std::uniform_int_distribution<int> side(1, 256);
  std::uniform_int_distribution<int> levels(1, 40);
  for (int i = 0; i < 1000; ++i) {
    const int w = side(rng);
    const int h = side(rng);
    bool ok = true;
    switch (i % 4) {
      case 0:
        ok = TileInvariantsHold(RandomImage<uint8_t>(w, h, rng));
        break;
      case 1:
        ok = TileInvariantsHold(RandomImage<uint16_t>(w, h, rng));
        break;
      case 2:
        ok = TileInvariantsHold(RandomImage<float>(w, h, rng));
        break;
      default:
        // Heavy ties exercise stability.
        ok = TileInvariantsHold(testing::FewLevelsImage<float>(w, h, levels(rng), rng)) &&
             TileInvariantsHold(testing::FewLevelsImage<uint16_t>(w, h, levels(rng), rng));
    }
    if (!ok) return {false, absl::StrCat("invariant broken on tile ", i, " (", w, "x", h, ")")};
  }
  return {true, "1000 random tiles: permutation, inverse, sorted reverse map, stable ties"};
}

Outcome MonotoneCommutation() {
  std::mt19937 rng(1004);
  // A strictly increasing map on all of 0..255 is the identity, so the
  // images use the 100 values 0..99 and f maps them into 0..255.
  constexpr int kDomain = 100;
  std::vector<int> all(256);
  for (int i = 0; i < 256; ++i) all[i] = i;
  std::uniform_int_distribution<int> radius(1, 20);
  std::uniform_real_distribution<double> percentile(0.0, 1.0);
  std::uniform_int_distribution<int> value(0, kDomain - 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> picks;
    std::sample(all.begin(), all.end(), std::back_inserter(picks), kDomain, rng);
    std::sort(picks.begin(), picks.end());
    Image<uint8_t> image(200, 160);
    for (uint8_t& v : image.pixels()) v = static_cast<uint8_t>(value(rng));
    Image<uint8_t> mapped = image;
    for (uint8_t& v : mapped.pixels()) v = static_cast<uint8_t>(picks[v]);
    FilterParams params;
    params.shape = ShapeSpec::Circle(radius(rng));
    params.percentile = percentile(rng);
    absl::StatusOr<Image<uint8_t>> filtered = FilterImage(image, params);
    absl::StatusOr<Image<uint8_t>> filtered_mapped = FilterImage(mapped, params);
    if (!filtered.ok() || !filtered_mapped.ok()) return {false, "filter error"};
    for (uint8_t& v : filtered->pixels()) v = static_cast<uint8_t>(picks[v]);
    if (*filtered != *filtered_mapped) {
      return {false, absl::StrCat("trial ", trial, " r=", params.shape.radius)};
    }
  }
  return {true, "20 random strictly increasing maps commute with the filter"};
}

Outcome ForwardingNeutrality() {
  std::mt19937 rng(1005);
  const Image<uint16_t> image = RandomImage<uint16_t>(300, 280, rng);
  const Image<float> floats = RandomImage<float>(190, 230, rng);
  FilterParams base;
  base.shape = ShapeSpec::Circle(12);
  base.percentile = 0.5;
  const Image<uint16_t> reference = *ReferenceFilter(image, base);
  const Image<float> float_reference = *ReferenceFilter(floats, base);
  int runs = 0;
  for (const bool forwarding : {true, false}) {
    for (const int tile : {16, 32, 64}) {
      for (const int workers : {1, 8}) {
        FilterParams p = base;
        p.forwarding = forwarding;
        p.tile_size = tile;
        p.workers = workers;
        absl::StatusOr<Image<uint16_t>> out = FilterImage(image, p);
        absl::StatusOr<Image<float>> fout = FilterImage(floats, p);
        runs += 2;
        if (!out.ok() || !fout.ok() || !BitIdentical(*out, reference) ||
            !BitIdentical(*fout, float_reference)) {
          return {false, absl::StrCat("differs at forwarding=", forwarding,
                                      " tile=", tile, " workers=", workers)};
        }
      }
    }
  }
  return {true, absl::StrCat(runs,
                             " runs (forwarding on/off x tiles 16/32/64 x "
                             "workers 1/8) byte-identical")};
}

Outcome RotationalInvariance() {
  std::mt19937 rng(1006);
  const Image<uint8_t> noise = BinaryNoise<uint8_t>(512, 512, rng);
  absl::StatusOr<Image<float>> gray = tools::ToFloatGray(noise);
  tools::CompareOptions options;
  options.radius = 16;
  options.angle_deg = 22.5;
  absl::StatusOr<tools::CompareReport> report = tools::CompareKernels(*gray, options);
  if (!report.ok()) return {false, std::string(report.status().message())};
  return {report->ratio >= 10.0,
          absl::StrFormat("512^2 binary noise, r=16: circle std %.3f, square "
                          "std %.3f, ratio %.2f (need >= 10)",
                          report->circle_std, report->square_std, report->ratio)};
}

template <typename Fn>
double BestOf(int runs, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < runs; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, Seconds(start));
  }
  return best;
}

Outcome Scaling() {
  std::mt19937 rng(1007);
  const Image<uint8_t> image = RandomImage<uint8_t>(1024, 1024, rng);
  auto params_for = [](int r) {
    FilterParams p;
    p.shape = ShapeSpec::Circle(r);
    return p;
  };
  (void)FilterImage(image, params_for(4));  // Warmup.
  const std::vector<int> radii = {4, 8, 16, 32, 48, 64};
  std::vector<double> times;
  for (const int r : radii) {
    times.push_back(BestOf(3, [&] { (void)FilterImage(image, params_for(r)); }));
  }
  const double oracle = BestOf(1, [&] { (void)ReferenceFilter(image, params_for(32)); });
  const double fast32 = times[3];
  const double speedup = oracle / fast32;

  // Least-squares slope of log(time) against log(radius).
  double mx = 0, my = 0;
  for (size_t i = 0; i < radii.size(); ++i) {
    mx += std::log(radii[i]);
    my += std::log(times[i]);
  }
  mx /= radii.size();
  my /= radii.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < radii.size(); ++i) {
    sxy += (std::log(radii[i]) - mx) * (std::log(times[i]) - my);
    sxx += (std::log(radii[i]) - mx) * (std::log(radii[i]) - mx);
  }
  const double slope = sxy / sxx;
  std::string timings;
  for (size_t i = 0; i < radii.size(); ++i) {
    absl::StrAppendFormat(&timings, "%sr%d=%.0fms", i ? " " : "", radii[i],
                          times[i] * 1000);
  }
  return {speedup >= 20.0 && slope <= 1.3,
          absl::StrFormat("1 MP uint8: oracle/fast at r=32 = %.1fx (need >= "
                          "20); log-log slope %.2f (need <= 1.3); %s",
                          speedup, slope, timings)};
}

Outcome FloatCorrectness() {
  std::mt19937 rng(1008);
  std::uniform_int_distribution<uint32_t> bits;
  std::vector<float> values;
  values.reserve(1000000);
  while (values.size() < 1000000) {
    const float v = std::bit_cast<float>(bits(rng));
    if (std::isfinite(v)) values.push_back(v);
  }
  std::vector<float> by_key = values;
  std::sort(by_key.begin(), by_key.end(),
            [](float a, float b) { return FloatOrderKey(a) < FloatOrderKey(b); });
  std::vector<float> numeric = values;
  std::sort(numeric.begin(), numeric.end());
  if (by_key != numeric) return {false, "key order differs from numeric order"};
  if (!(FloatOrderKey(-0.0f) < FloatOrderKey(0.0f))) {
    return {false, "-0.0 not ordered before +0.0"};
  }
  Image<float> with_nan(32, 32, 1, 1.0f);
  with_nan.at(7, 9) = std::numeric_limits<float>::quiet_NaN();
  FilterParams params;
  params.shape = ShapeSpec::Circle(3);
  absl::StatusOr<Image<float>> fast = FilterImage(with_nan, params);
  absl::StatusOr<Image<float>> oracle = ReferenceFilter(with_nan, params);
  const bool rejected =
      !fast.ok() && !oracle.ok() &&
      fast.status().message().find("NaN") != std::string_view::npos;
  if (!rejected) return {false, "NaN input not rejected with a diagnostic"};
  return {true, absl::StrCat("10^6 floats sort identically; -0 < +0; NaN rejected: \"",
                             std::string(fast.status().message()), "\"")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace isomedian

int main(int argc, char** argv) {
  using namespace isomedian;
  const std::vector<Criterion> criteria = {
      {1, "Exactness vs. oracle", Exactness},
      {2, "Kernel rasterization anchor", KernelArea},
      {3, "Ordinal-transform invariants", OrdinalInvariants},
      {4, "Monotone-map commutation", MonotoneCommutation},
      {5, "Forwarding neutrality and determinism", ForwardingNeutrality},
      {6, "Rotational invariance", RotationalInvariance},
      {7, "Scaling behavior", Scaling},
      {8, "Float correctness", FloatCorrectness},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = c.run();
    failures += !outcome.pass;
    std::printf("%s %d. %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), Seconds(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
