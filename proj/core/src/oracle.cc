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

#include "isomedian/oracle.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "isomedian/kernel_geometry.h"
#include "parallel.h"

namespace isomedian {

template <PixelType T>
bool OracleLess(T a, T b) {
  if constexpr (std::is_same_v<T, float>) {
    if (a == b) return std::signbit(a) && !std::signbit(b);
  }
  return a < b;
}

template bool OracleLess(uint8_t, uint8_t);
template bool OracleLess(uint16_t, uint16_t);
template bool OracleLess(float, float);

namespace {

struct Tap {
  int dx;
  int dy;
};

// Each window's values are gathered in row-major offset order and the target
// ranks selected with nth_element. Because OracleLess is a total order on the
// pixel values the selected bit pattern equals what a stable sort by (value,
// position) would return.
template <PixelType T>
absl::StatusOr<std::vector<Image<T>>> Run(
    const Image<T>& image, const FilterParams& params,
    std::span<const double> percentiles,
    const Image<float>* percentile_map) {
  if (absl::Status s = ValidateShapeSpec(params.shape); !s.ok()) return s;
  if (image.empty()) return absl::InvalidArgumentError("Image is empty.");
  if constexpr (std::is_same_v<T, float>) {
    for (const float v : image.pixels()) {
      if (std::isnan(v)) {
        return absl::InvalidArgumentError(
            "NaN pixel in input; NaN inputs are not supported.");
      }
    }
  }

  const int r = params.shape.radius;
  std::vector<Tap> taps;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (Contains(params.shape, dx, dy)) taps.push_back({dx, dy});
    }
  }
  const int area = static_cast<int>(taps.size());

  int out_w = image.width();
  int out_h = image.height();
  int origin = 0;
  if (params.boundary == BoundaryMode::kValid) {
    if (image.width() < 2 * r + 1 || image.height() < 2 * r + 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Valid-mode filtering needs at least ", 2 * r + 1, "x", 2 * r + 1,
          " pixels, got ", image.width(), "x", image.height()));
    }
    out_w -= 2 * r;
    out_h -= 2 * r;
    origin = r;
  }

  std::vector<int> ranks;
  for (const double p : percentiles) {
    absl::StatusOr<int> rank = TargetRank(area, p);
    if (!rank.ok()) return rank.status();
    ranks.push_back(*rank);
  }
  if (percentile_map != nullptr) {
    if (percentile_map->width() != out_w || percentile_map->height() != out_h) {
      return absl::InvalidArgumentError("Percentile map size mismatch.");
    }
    for (const float p : percentile_map->pixels()) {
      if (!(p >= 0.0f && p <= 1.0f)) {
        return absl::InvalidArgumentError("Percentile map value out of range.");
      }
    }
  }

  const int num_outputs =
      percentile_map != nullptr ? 1 : static_cast<int>(ranks.size());
  std::vector<Image<T>> outputs(num_outputs,
                                Image<T>(out_w, out_h, image.channels()));

  // Distinct ranks in ascending order, for chained selection.
  std::vector<int> order(ranks);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  // Tap offsets in elements, for windows that need no clamping.
  std::vector<ptrdiff_t> linear(area);
  for (int i = 0; i < area; ++i) {
    linear[i] = taps[i].dy * image.stride() + taps[i].dx * image.channels();
  }

  const auto less = [](T a, T b) { return OracleLess(a, b); };
  internal::ParallelFor(out_h, params.workers, [&](int y) {
    std::vector<T> values(area);
    std::vector<T> selected(area);
    const int cy = y + origin;
    const bool rows_inside = cy - r >= 0 && cy + r < image.height();
    for (int c = 0; c < image.channels(); ++c) {
      for (int x = 0; x < out_w; ++x) {
        const int cx = x + origin;
        if (rows_inside && cx - r >= 0 && cx + r < image.width()) {
          const T* center = &image.at(cx, cy, c);
          for (int i = 0; i < area; ++i) values[i] = center[linear[i]];
        } else {
          for (int i = 0; i < area; ++i) {
            const int sx = std::clamp(cx + taps[i].dx, 0, image.width() - 1);
            const int sy = std::clamp(cy + taps[i].dy, 0, image.height() - 1);
            values[i] = image.at(sx, sy, c);
          }
        }
        if (percentile_map != nullptr) {
          const int rank = TargetRankUnchecked(area, percentile_map->at(x, y));
          std::nth_element(values.begin(), values.begin() + rank, values.end(),
                           less);
          outputs[0].at(x, y, c) = values[rank];
          continue;
        }
        auto begin = values.begin();
        for (const int rank : order) {
          std::nth_element(begin, values.begin() + rank, values.end(), less);
          selected[rank] = values[rank];
          begin = values.begin() + rank + 1;
        }
        for (int k = 0; k < num_outputs; ++k) {
          outputs[k].at(x, y, c) = selected[ranks[k]];
        }
      }
    }
  });
  return outputs;
}

}  // namespace

template <PixelType T>
absl::StatusOr<Image<T>> ReferenceFilter(const Image<T>& image,
                                         const FilterParams& params) {
  const double percentile = params.percentile;
  absl::StatusOr<std::vector<Image<T>>> outputs =
      params.percentile_map.has_value()
          ? Run(image, params, {}, &*params.percentile_map)
          : Run(image, params, std::span<const double>(&percentile, 1),
                nullptr);
  if (!outputs.ok()) return outputs.status();
  return std::move(outputs->front());
}

template <PixelType T>
absl::StatusOr<std::vector<Image<T>>> ReferenceFilterMulti(
    const Image<T>& image, const FilterParams& params,
    std::span<const double> percentiles) {
  if (percentiles.empty()) {
    return absl::InvalidArgumentError("Percentile list is empty.");
  }
  return Run(image, params, percentiles, nullptr);
}

template absl::StatusOr<Image<uint8_t>> ReferenceFilter(const Image<uint8_t>&,
                                                        const FilterParams&);
template absl::StatusOr<Image<uint16_t>> ReferenceFilter(
    const Image<uint16_t>&, const FilterParams&);
template absl::StatusOr<Image<float>> ReferenceFilter(const Image<float>&,
                                                      const FilterParams&);
template absl::StatusOr<std::vector<Image<uint8_t>>> ReferenceFilterMulti(
    const Image<uint8_t>&, const FilterParams&, std::span<const double>);
template absl::StatusOr<std::vector<Image<uint16_t>>> ReferenceFilterMulti(
    const Image<uint16_t>&, const FilterParams&, std::span<const double>);
template absl::StatusOr<std::vector<Image<float>>> ReferenceFilterMulti(
    const Image<float>&, const FilterParams&, std::span<const double>);

}  // namespace isomedian
