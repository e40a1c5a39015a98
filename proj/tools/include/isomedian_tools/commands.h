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


// Subcommand implementations behind the isomedian executable. Each command
// validates its flags first (usage errors) and then does the work
// (processing errors), so the front end can map the two to exit codes.

#ifndef ISOMEDIAN_TOOLS_COMMANDS_H_
#define ISOMEDIAN_TOOLS_COMMANDS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "isomedian/image.h"
#include "isomedian/kernel_geometry.h"
#include "isomedian/tiling.h"
#include "isomedian_tools/image_io.h"

namespace isomedian::tools {

enum class Engine { kFast, kOracle };

absl::StatusOr<Engine> ParseEngine(std::string_view name);
std::string_view EngineName(Engine engine);

// "circle", "square", "poly:K" or "poly:K:ROT" (rotation in degrees).
absl::StatusOr<ShapeSpec> ParseShape(std::string_view text, int radius);

struct FilterOptions {
  int radius = 0;
  double percentile = 50.0;  // 0..100.
  std::string shape = "circle";
  std::string boundary = "replicate";
  int tile = 0;
  bool no_forwarding = false;
  std::string engine = "fast";
  int threads = 0;
  std::string percentile_map;  // Optional path.
};

// Flag validation only; touches no files.
absl::StatusOr<FilterParams> ParamsFromOptions(const FilterOptions& options);

// 8- and 16-bit maps are scaled by their maxval; float maps hold percentiles
// in 0..100. The result holds fractions in [0, 1].
absl::StatusOr<Image<float>> PercentileMapFromImage(const AnyImage& map);

absl::StatusOr<AnyImage> ApplyFilter(const AnyImage& input,
                                     const FilterParams& params, Engine engine);

// Reads `input_path`, filters and writes `output_path`. Expects options that
// passed ParamsFromOptions.
absl::Status RunFilter(const std::string& input_path,
                       const std::string& output_path,
                       const FilterOptions& options);

// Rotates about the image center with bilinear sampling; samples outside
// the frame replicate the nearest edge pixel. Positive angles turn the
// content clockwise on screen (y grows downward).
Image<float> RotateBilinear(const Image<float>& image, double angle_deg);

// Radius of the square whose area is closest to `area`.
int EqualAreaSquareRadius(int area);

struct CompareOptions {
  int radius = 16;
  double angle_deg = 22.5;
  double percentile = 50.0;
  int threads = 0;
  std::string diff_prefix;  // Writes <prefix>_circle.pfm and _square.pfm.
};

struct CompareReport {
  int radius = 0;
  double angle_deg = 0.0;
  int circle_area = 0;
  int square_radius = 0;
  int square_area = 0;
  TileRect crop;
  double circle_std = 0.0;
  double square_std = 0.0;
  double ratio = 0.0;  // square_std / circle_std; NaN when both are zero.
  Image<float> circle_diff;  // Cropped difference images.
  Image<float> square_diff;
};

// Rotates the input by +angle and -angle, filters each with a circle and
// with the equal-area square, rotates back, and measures the standard
// deviation of the difference between the two results inside the largest
// centered rectangle that no boundary sample can reach.
absl::StatusOr<CompareReport> CompareKernels(const Image<float>& gray,
                                             const CompareOptions& options);
std::string CompareCsv(const CompareReport& report);

absl::StatusOr<Image<float>> ToFloatGray(const AnyImage& image);

struct BenchOptions {
  std::vector<int> radii = {2, 4, 8, 16, 32, 48, 64, 96};
  std::vector<std::string> engines = {"fast"};
  std::string shape = "circle";
  double percentile = 50.0;
  int threads = 0;
  int repeats = 3;
};

struct BenchRecord {
  int radius = 0;
  std::string engine;
  std::string dtype;
  double mp = 0.0;
  double ms = 0.0;
  double mps = 0.0;  // mp / seconds.
};

// One warmup run, then the best of `repeats` timed runs per radius.
absl::StatusOr<std::vector<BenchRecord>> RunBench(const AnyImage& input,
                                                  const BenchOptions& options);
std::string BenchCsv(std::span<const BenchRecord> records);

struct NoiseOptions {
  int width = 512;
  int height = 512;
  int channels = 1;
  std::string type = "u8";
  bool binary = false;
  unsigned seed = 1;
};

absl::StatusOr<AnyImage> MakeNoise(const NoiseOptions& options);

}  // namespace isomedian::tools

#endif  // ISOMEDIAN_TOOLS_COMMANDS_H_
