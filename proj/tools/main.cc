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


// isomedian: exact percentile filtering with circular and polygonal kernels.
//
// Exit status: 0 on success, 2 on usage errors, 1 on processing errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "isomedian_tools/commands.h"

namespace {

constexpr int kUsageError = 2;
constexpr int kProcessingError = 1;

int Fail(int code, const absl::Status& status) {
  std::cerr << "isomedian: " << status.message() << "\n";
  return code;
}

int WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "isomedian: cannot write " << path << "\n";
    return kProcessingError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace isomedian::tools;

  CLI::App app{"Exact isotropic median and percentile filtering."};
  app.require_subcommand(1);

  FilterOptions filter;
  std::string filter_in;
  std::string filter_out;
  CLI::App* filter_cmd = app.add_subcommand("filter", "Filter an image.");
  filter_cmd->add_option("input", filter_in, "PGM, PPM or PFM input")->required();
  filter_cmd->add_option("output", filter_out, "Output path")->required();
  filter_cmd->add_option("--radius,-r", filter.radius, "Kernel radius")->required();
  filter_cmd->add_option("--percentile,-p", filter.percentile,
                         "Percentile 0..100 (50 = median)");
  filter_cmd->add_option("--shape", filter.shape, "circle|square|poly:K[:ROT]");
  filter_cmd->add_option("--boundary", filter.boundary, "replicate|valid");
  filter_cmd->add_option("--tile", filter.tile, "Output tile side (0 = auto)");
  filter_cmd->add_flag("--no-forwarding", filter.no_forwarding,
                       "Solve every tile from scratch");
  filter_cmd->add_option("--engine", filter.engine, "fast|oracle");
  filter_cmd->add_option("--threads", filter.threads, "Worker cap (0 = all cores)");
  filter_cmd->add_option("--percentile-map", filter.percentile_map,
                         "Per-pixel percentile image");

  CompareOptions compare;
  std::string compare_in;
  std::string compare_csv;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Rotation test: circle vs. equal-area square.");
  compare_cmd->add_option("input", compare_in, "Grayscale input")->required();
  compare_cmd->add_option("--radius,-r", compare.radius, "Circle radius");
  compare_cmd->add_option("--angle", compare.angle_deg, "Rotation in degrees");
  compare_cmd->add_option("--percentile,-p", compare.percentile, "Percentile 0..100");
  compare_cmd->add_option("--threads", compare.threads, "Worker cap");
  compare_cmd->add_option("--diff-prefix", compare.diff_prefix,
                          "Write difference images as PREFIX_{circle,square}.pfm");
  compare_cmd->add_option("--csv", compare_csv, "CSV output path (default stdout)");

  BenchOptions bench;
  std::string bench_in;
  std::string bench_csv;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the filter over radii.");
  bench_cmd->add_option("input", bench_in, "Input image")->required();
  bench_cmd->add_option("--radii", bench.radii, "Radius list")->delimiter(',');
  bench_cmd->add_option("--engine", bench.engines, "fast,oracle")->delimiter(',');
  bench_cmd->add_option("--shape", bench.shape, "circle|square|poly:K[:ROT]");
  bench_cmd->add_option("--percentile,-p", bench.percentile, "Percentile 0..100");
  bench_cmd->add_option("--threads", bench.threads, "Worker cap");
  bench_cmd->add_option("--repeats", bench.repeats, "Timed runs per radius");
  bench_cmd->add_option("--csv", bench_csv, "CSV output path (default stdout)");

  NoiseOptions noise;
  std::string noise_out;
  CLI::App* noise_cmd = app.add_subcommand("noise", "Write a random test image.");
  noise_cmd->add_option("output", noise_out, "Output path")->required();
  noise_cmd->add_option("--width", noise.width, "Width");
  noise_cmd->add_option("--height", noise.height, "Height");
  noise_cmd->add_option("--channels", noise.channels, "1 or 3");
  noise_cmd->add_option("--type", noise.type, "u8|u16|f32");
  noise_cmd->add_flag("--binary", noise.binary, "Only the extreme values");
  noise_cmd->add_option("--seed", noise.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (filter_cmd->parsed()) {
    if (absl::StatusOr<isomedian::FilterParams> params = ParamsFromOptions(filter);
        !params.ok()) {
      return Fail(kUsageError, params.status());
    }
    if (absl::Status s = RunFilter(filter_in, filter_out, filter); !s.ok()) {
      return Fail(kProcessingError, s);
    }
    return 0;
  }

  if (compare_cmd->parsed()) {
    if (compare.radius < 0 || compare.radius > isomedian::kMaxFilterRadius ||
        !(compare.percentile >= 0.0 && compare.percentile <= 100.0)) {
      return Fail(kUsageError,
                  absl::InvalidArgumentError("Radius or percentile out of range."));
    }
    absl::StatusOr<AnyImage> input = ReadImage(compare_in);
    if (!input.ok()) return Fail(kProcessingError, input.status());
    absl::StatusOr<isomedian::Image<float>> gray = ToFloatGray(*input);
    if (!gray.ok()) return Fail(kProcessingError, gray.status());
    absl::StatusOr<CompareReport> report = CompareKernels(*gray, compare);
    if (!report.ok()) return Fail(kProcessingError, report.status());
    if (!compare.diff_prefix.empty()) {
      for (const auto& [suffix, image] :
           {std::pair{"_circle.pfm", &report->circle_diff},
            std::pair{"_square.pfm", &report->square_diff}}) {
        if (absl::Status s = WriteImage(compare.diff_prefix + suffix, *image);
            !s.ok()) {
          return Fail(kProcessingError, s);
        }
      }
    }
    return WriteText(compare_csv, CompareCsv(*report));
  }

  if (bench_cmd->parsed()) {
    for (const std::string& engine : bench.engines) {
      if (!ParseEngine(engine).ok() || bench.repeats < 1) {
        return Fail(kUsageError, absl::InvalidArgumentError(
                                     "Engines must be fast or oracle and "
                                     "--repeats at least 1."));
      }
    }
    for (const int radius : bench.radii) {
      FilterOptions probe;
      probe.radius = radius;
      probe.shape = bench.shape;
      probe.percentile = bench.percentile;
      if (absl::StatusOr<isomedian::FilterParams> p = ParamsFromOptions(probe);
          !p.ok()) {
        return Fail(kUsageError, p.status());
      }
    }
    absl::StatusOr<AnyImage> input = ReadImage(bench_in);
    if (!input.ok()) return Fail(kProcessingError, input.status());
    absl::StatusOr<std::vector<BenchRecord>> records = RunBench(*input, bench);
    if (!records.ok()) return Fail(kProcessingError, records.status());
    return WriteText(bench_csv, BenchCsv(*records));
  }

  if (noise_cmd->parsed()) {
    absl::StatusOr<AnyImage> image = MakeNoise(noise);
    if (!image.ok()) return Fail(kUsageError, image.status());
    if (absl::Status s = WriteImage(noise_out, *image); !s.ok()) {
      return Fail(kProcessingError, s);
    }
    return 0;
  }
  return kUsageError;
}
