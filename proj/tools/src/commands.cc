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


#include "isomedian_tools/commands.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "isomedian/oracle.h"

namespace isomedian::tools {

absl::StatusOr<Engine> ParseEngine(std::string_view name) {
  if (name == "fast") return Engine::kFast;
  if (name == "oracle") return Engine::kOracle;
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown engine '", std::string(name),
                   "'; expected fast or oracle."));
}

std::string_view EngineName(Engine engine) {
  return engine == Engine::kFast ? "fast" : "oracle";
}

absl::StatusOr<ShapeSpec> ParseShape(std::string_view text, int radius) {
  if (text == "circle") return ShapeSpec::Circle(radius);
  if (text == "square") return ShapeSpec::Square(radius);
  const std::vector<std::string> parts = absl::StrSplit(std::string(text), ':');
  if (parts[0] == "poly" && (parts.size() == 2 || parts.size() == 3)) {
    int sides = 0;
    double rotation = 0.0;
    if (absl::SimpleAtoi(parts[1], &sides) &&
        (parts.size() == 2 || absl::SimpleAtod(parts[2], &rotation))) {
      ShapeSpec spec = ShapeSpec::Polygon(radius, sides, rotation);
      if (absl::Status s = ValidateShapeSpec(spec); !s.ok()) return s;
      return spec;
    }
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Bad shape '", std::string(text), "'; expected circle, square or poly:K[:ROT]."));
}

absl::StatusOr<FilterParams> ParamsFromOptions(const FilterOptions& options) {
  FilterParams params;
  absl::StatusOr<ShapeSpec> shape = ParseShape(options.shape, options.radius);
  if (!shape.ok()) return shape.status();
  params.shape = *shape;
  if (!(options.percentile >= 0.0 && options.percentile <= 100.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Percentile must be within 0..100, got ", options.percentile));
  }
  params.percentile = options.percentile / 100.0;
  if (options.boundary == "replicate") {
    params.boundary = BoundaryMode::kReplicate;
  } else if (options.boundary == "valid") {
    params.boundary = BoundaryMode::kValid;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "Bad boundary '", options.boundary, "'; expected replicate or valid."));
  }
  if (absl::StatusOr<Engine> engine = ParseEngine(options.engine); !engine.ok()) {
    return engine.status();
  }
  params.tile_size = options.tile;
  params.forwarding = !options.no_forwarding;
  params.workers = options.threads;
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  return params;
}

absl::StatusOr<Image<float>> PercentileMapFromImage(const AnyImage& map) {
  if (Channels(map) != 1) {
    return absl::InvalidArgumentError("Percentile map must be grayscale.");
  }
  return std::visit(
      [](const auto& img) -> absl::StatusOr<Image<float>> {
        using T = typename std::decay_t<decltype(img)>::value_type;
        Image<float> out(img.width(), img.height());
        for (size_t i = 0; i < out.pixels().size(); ++i) {
          float v;
          if constexpr (std::is_same_v<T, float>) {
            if (!(img.pixels()[i] >= 0.0f && img.pixels()[i] <= 100.0f)) {
              return absl::InvalidArgumentError(absl::StrCat(
                  "Float percentile map values must be within 0..100, got ",
                  img.pixels()[i]));
            }
            v = img.pixels()[i] / 100.0f;
          } else {
            v = static_cast<float>(img.pixels()[i]) /
                static_cast<float>(std::numeric_limits<T>::max());
          }
          out.pixels()[i] = v;
        }
        return out;
      },
      map);
}

absl::StatusOr<AnyImage> ApplyFilter(const AnyImage& input,
                                     const FilterParams& params,
                                     Engine engine) {
  return std::visit(
      [&](const auto& img) -> absl::StatusOr<AnyImage> {
        auto result = engine == Engine::kFast ? FilterImage(img, params)
                                              : ReferenceFilter(img, params);
        if (!result.ok()) return result.status();
        return AnyImage(*std::move(result));
      },
      input);
}

absl::Status RunFilter(const std::string& input_path,
                       const std::string& output_path,
                       const FilterOptions& options) {
  absl::StatusOr<FilterParams> params = ParamsFromOptions(options);
  if (!params.ok()) return params.status();
  absl::StatusOr<AnyImage> input = ReadImage(input_path);
  if (!input.ok()) return input.status();
  if (!options.percentile_map.empty()) {
    absl::StatusOr<AnyImage> map = ReadImage(options.percentile_map);
    if (!map.ok()) return map.status();
    absl::StatusOr<Image<float>> fractions = PercentileMapFromImage(*map);
    if (!fractions.ok()) return fractions.status();
    params->percentile_map = *std::move(fractions);
  }
  absl::StatusOr<AnyImage> output =
      ApplyFilter(*input, *params, *ParseEngine(options.engine));
  if (!output.ok()) return output.status();
  return WriteImage(output_path, *output);
}

Image<float> RotateBilinear(const Image<float>& image, double angle_deg) {
  const int w = image.width();
  const int h = image.height();
  const int channels = image.channels();
  Image<float> out(w, h, channels);
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Inverse map: source = R(-theta) (p - center) + center.
      const double px = x - cx;
      const double py = y - cy;
      const double sx = c * px + s * py + cx;
      const double sy = -s * px + c * py + cy;
      const double fx = std::floor(sx);
      const double fy = std::floor(sy);
      const double ax = sx - fx;
      const double ay = sy - fy;
      const int x0 = std::clamp(static_cast<int>(fx), 0, w - 1);
      const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, w - 1);
      const int y0 = std::clamp(static_cast<int>(fy), 0, h - 1);
      const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, h - 1);
      for (int ch = 0; ch < channels; ++ch) {
        const double top = (1 - ax) * image.at(x0, y0, ch) + ax * image.at(x1, y0, ch);
        const double bottom =
            (1 - ax) * image.at(x0, y1, ch) + ax * image.at(x1, y1, ch);
        out.at(x, y, ch) = static_cast<float>((1 - ay) * top + ay * bottom);
      }
    }
  }
  return out;
}

int EqualAreaSquareRadius(int area) {
  int best = 0;
  for (int r = 1; (2 * r - 1) * (2 * r - 1) <= area; ++r) {
    if (std::abs((2 * r + 1) * (2 * r + 1) - area) <
        std::abs((2 * best + 1) * (2 * best + 1) - area)) {
      best = r;
    }
  }
  return best;
}

namespace {

// Largest centered rectangle whose pixels, rotated by either sign of the
// angle, stay at least `margin` inside the frame, and whose own pixels do
// too. Every sample feeding such a pixel comes from real image data.
TileRect SafeCrop(int w, int h, double angle_deg, double margin) {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::abs(std::sin(theta));
  const double hx = (w - 1) / 2.0;
  const double hy = (h - 1) / 2.0;
  // For a centered a x b half-size box, the worst corner of R(+-theta) is
  // (a c + b s, a s + b c).
  auto fits = [&](double a, double b) {
    return a <= hx - margin && b <= hy - margin &&
           a * c + b * s <= hx - margin && a * s + b * c <= hy - margin;
  };
  TileRect best;
  for (int kx = 0; 2 * kx < w; ++kx) {
    const double a = hx - kx;
    int ky = 0;
    while (2 * ky < h && !fits(a, hy - ky)) ++ky;
    if (2 * ky >= h) continue;
    const int cw = w - 2 * kx;
    const int ch = h - 2 * ky;
    if (cw * ch > best.width * best.height) best = {kx, ky, cw, ch};
  }
  return best;
}

double StdDev(const Image<float>& d) {
  double sum = 0.0;
  for (const float v : d.pixels()) sum += v;
  const double mean = sum / d.pixels().size();
  double sq = 0.0;
  for (const float v : d.pixels()) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / d.pixels().size());
}

}  // namespace

absl::StatusOr<Image<float>> ToFloatGray(const AnyImage& image) {
  if (Channels(image) != 1) {
    return absl::InvalidArgumentError("Expected a grayscale image.");
  }
  return std::visit(
      [](const auto& img) {
        Image<float> out(img.width(), img.height());
        std::transform(img.pixels().begin(), img.pixels().end(),
                       out.pixels().begin(),
                       [](auto v) { return static_cast<float>(v); });
        return out;
      },
      image);
}

absl::StatusOr<CompareReport> CompareKernels(const Image<float>& gray,
                                             const CompareOptions& options) {
  if (gray.channels() != 1) {
    return absl::InvalidArgumentError("Comparison needs a grayscale image.");
  }
  CompareReport report;
  report.radius = options.radius;
  report.angle_deg = options.angle_deg;

  FilterParams circle;
  circle.shape = ShapeSpec::Circle(options.radius);
  circle.percentile = options.percentile / 100.0;
  circle.workers = options.threads;
  if (absl::Status s = ValidateParams(circle); !s.ok()) return s;
  absl::StatusOr<KernelShape> circle_kernel = MakeKernel(circle.shape);
  if (!circle_kernel.ok()) return circle_kernel.status();
  report.circle_area = circle_kernel->area();
  report.square_radius = EqualAreaSquareRadius(report.circle_area);
  report.square_area = (2 * report.square_radius + 1) * (2 * report.square_radius + 1);
  FilterParams square = circle;
  square.shape = ShapeSpec::Square(report.square_radius);

  // Window reach plus one pixel for each of the two bilinear resamplings.
  const double reach = std::max<double>(options.radius,
                                        report.square_radius * std::numbers::sqrt2);
  report.crop = SafeCrop(gray.width(), gray.height(), options.angle_deg, reach + 2.0);
  if (report.crop.width < 1 || report.crop.height < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Image ", gray.width(), "x", gray.height(),
        " is too small for the comparison crop at radius ", options.radius,
        " and angle ", options.angle_deg));
  }

  const Image<float> plus = RotateBilinear(gray, options.angle_deg);
  const Image<float> minus = RotateBilinear(gray, -options.angle_deg);
  auto difference = [&](const FilterParams& params) -> absl::StatusOr<Image<float>> {
    absl::StatusOr<Image<float>> fp = FilterImage(plus, params);
    if (!fp.ok()) return fp.status();
    absl::StatusOr<Image<float>> fm = FilterImage(minus, params);
    if (!fm.ok()) return fm.status();
    const Image<float> back_plus = RotateBilinear(*fp, -options.angle_deg);
    const Image<float> back_minus = RotateBilinear(*fm, options.angle_deg);
    const TileRect& k = report.crop;
    Image<float> d(k.width, k.height);
    for (int y = 0; y < k.height; ++y) {
      for (int x = 0; x < k.width; ++x) {
        d.at(x, y) = back_plus.at(k.x + x, k.y + y) - back_minus.at(k.x + x, k.y + y);
      }
    }
    return d;
  };
  absl::StatusOr<Image<float>> circle_diff = difference(circle);
  if (!circle_diff.ok()) return circle_diff.status();
  absl::StatusOr<Image<float>> square_diff = difference(square);
  if (!square_diff.ok()) return square_diff.status();
  report.circle_diff = *std::move(circle_diff);
  report.square_diff = *std::move(square_diff);
  report.circle_std = StdDev(report.circle_diff);
  report.square_std = StdDev(report.square_diff);
  report.ratio = report.circle_std == 0.0 && report.square_std == 0.0
                     ? std::numeric_limits<double>::quiet_NaN()
                     : report.square_std / report.circle_std;
  return report;
}

std::string CompareCsv(const CompareReport& r) {
  return absl::StrCat(
      "radius,angle_deg,circle_area,square_radius,square_area,crop_x,crop_y,"
      "crop_width,crop_height,circle_std,square_std,ratio\n",
      r.radius, ",", r.angle_deg, ",", r.circle_area, ",", r.square_radius, ",",
      r.square_area, ",", r.crop.x, ",", r.crop.y, ",", r.crop.width, ",",
      r.crop.height, ",", r.circle_std, ",", r.square_std, ",", r.ratio, "\n");
}

absl::StatusOr<std::vector<BenchRecord>> RunBench(const AnyImage& input,
                                                  const BenchOptions& options) {
  if (options.repeats < 1) {
    return absl::InvalidArgumentError("Repeat count must be at least 1.");
  }
  std::vector<Engine> engines;
  for (const std::string& name : options.engines) {
    absl::StatusOr<Engine> engine = ParseEngine(name);
    if (!engine.ok()) return engine.status();
    engines.push_back(*engine);
  }
  const double mp = static_cast<double>(Width(input)) * Height(input) *
                    Channels(input) / 1e6;
  std::vector<BenchRecord> records;
  for (const Engine engine : engines) {
    for (const int radius : options.radii) {
      FilterOptions flags;
      flags.radius = radius;
      flags.shape = options.shape;
      flags.percentile = options.percentile;
      flags.threads = options.threads;
      absl::StatusOr<FilterParams> params = ParamsFromOptions(flags);
      if (!params.ok()) return params.status();
      double best_ms = std::numeric_limits<double>::infinity();
      for (int run = 0; run <= options.repeats; ++run) {
        const auto start = std::chrono::steady_clock::now();
        absl::StatusOr<AnyImage> out = ApplyFilter(input, *params, engine);
        const auto stop = std::chrono::steady_clock::now();
        if (!out.ok()) return out.status();
        // Run 0 is the warmup.
        if (run > 0) {
          best_ms = std::min(
              best_ms, std::chrono::duration<double, std::milli>(stop - start).count());
        }
      }
      records.push_back({radius, std::string(EngineName(engine)),
                         std::string(TypeName(input)), mp, best_ms,
                         mp / (best_ms / 1000.0)});
    }
  }
  return records;
}

std::string BenchCsv(std::span<const BenchRecord> records) {
  std::string out = "radius,engine,dtype,mp,ms,mps\n";
  for (const BenchRecord& r : records) {
    absl::StrAppend(&out, r.radius, ",", r.engine, ",", r.dtype, ",", r.mp, ",",
                    r.ms, ",", r.mps, "\n");
  }
  return out;
}

absl::StatusOr<AnyImage> MakeNoise(const NoiseOptions& options) {
  if (options.width < 1 || options.height < 1) {
    return absl::InvalidArgumentError("Noise image size must be positive.");
  }
  if (options.channels != 1 && options.channels != 3) {
    return absl::InvalidArgumentError("Noise images have 1 or 3 channels.");
  }
  std::mt19937 rng(options.seed);
  auto fill = [&]<typename T>(T low, T high) {
    Image<T> image(options.width, options.height, options.channels);
    std::bernoulli_distribution coin(0.5);
    for (T& v : image.pixels()) {
      if (options.binary) {
        v = coin(rng) ? high : low;
      } else if constexpr (std::is_same_v<T, float>) {
        v = std::uniform_real_distribution<float>(low, high)(rng);
      } else {
        v = static_cast<T>(std::uniform_int_distribution<int>(low, high)(rng));
      }
    }
    return AnyImage(std::move(image));
  };
  if (options.type == "u8") return fill(uint8_t{0}, uint8_t{255});
  if (options.type == "u16") return fill(uint16_t{0}, uint16_t{65535});
  if (options.type == "f32") return fill(0.0f, 1.0f);
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown pixel type '", options.type, "'; expected u8, u16 or f32."));
}

}  // namespace isomedian::tools
