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

#include "isomedian/tiling.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "isomedian/filter_core.h"
#include "isomedian/ordinal.h"
#include "parallel.h"

namespace isomedian {
namespace {

using internal::ParallelFor;

// Marks input-tile pixels that some window of the solve rectangle can reach.
// For a circle this is the rounded rectangle of pixels whose nearest solve
// center is within the kernel.
std::vector<uint8_t> RoundedFootprint(const KernelShape& kernel, int solve_w,
                                      int solve_h) {
  const int r = kernel.radius();
  const int w = solve_w + 2 * r;
  const int h = solve_h + 2 * r;
  std::vector<uint8_t> mask(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const int dy = y - std::clamp(y, r, r + solve_h - 1);
    for (int x = 0; x < w; ++x) {
      const int dx = x - std::clamp(x, r, r + solve_w - 1);
      mask[y * w + x] = kernel.Contains(dx, dy) ? 1 : 0;
    }
  }
  return mask;
}

absl::Status AnnotateTile(const absl::Status& status, const Tile& tile) {
  return absl::Status(status.code(),
                      absl::StrCat("Tile at output (", tile.solve.x, ", ",
                                   tile.solve.y, "): ", status.message()));
}

template <PixelType T>
absl::StatusOr<Image<T>> FilterPlane(const Image<T>& plane,
                                     const FilterParams& params,
                                     const KernelShape& kernel) {
  const int r = kernel.radius();
  absl::StatusOr<std::pair<int, int>> out_size =
      OutputSize(plane.width(), plane.height(), params);
  if (!out_size.ok()) return out_size.status();
  const auto [out_w, out_h] = *out_size;

  absl::StatusOr<Image<T>> padded = PadImage(plane, r, params.boundary);
  if (!padded.ok()) return padded.status();

  std::vector<int32_t> rank_storage;
  RankMap ranks = RankMap::Constant(0);
  if (params.percentile_map.has_value()) {
    const Image<float>& map = *params.percentile_map;
    rank_storage.resize(static_cast<size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        rank_storage[y * out_w + x] =
            TargetRankUnchecked(kernel.area(), map.at(x, y));
      }
    }
    ranks = RankMap::PerPixel(rank_storage.data(), out_w);
  } else {
    absl::StatusOr<int> rank = TargetRank(kernel.area(), params.percentile);
    if (!rank.ok()) return rank.status();
    ranks = RankMap::Constant(*rank);
  }

  absl::StatusOr<TileGrid> grid =
      Decompose(plane.width(), plane.height(), params);
  if (!grid.ok()) return grid.status();

  const bool masked = params.rounded_footprint &&
                      kernel.spec().kind == ShapeKind::kCircle;

  // Work units: whole columns when forwarding, single tiles otherwise.
  std::vector<std::vector<int>> units;
  if (params.forwarding) {
    units.resize(grid->num_columns);
    for (int i = 0; i < static_cast<int>(grid->tiles.size()); ++i) {
      units[grid->tiles[i].column].push_back(i);
    }
  } else {
    for (int i = 0; i < static_cast<int>(grid->tiles.size()); ++i) {
      units.push_back({i});
    }
  }

  Image<T> output(out_w, out_h);
  std::vector<absl::Status> unit_status(units.size());
  const Image<T>& source = *padded;

  ParallelFor(static_cast<int>(units.size()), params.workers, [&](int u) {
    RowSolution last_row;
    Image<T> tile_output;
    for (const int tile_index : units[u]) {
      const Tile& tile = grid->tiles[tile_index];
      std::vector<uint8_t> mask;
      if (masked) mask = RoundedFootprint(kernel, tile.solve.width,
                                          tile.solve.height);
      TileView<T> view;
      view.data = source.data() + tile.solve.y * source.stride() + tile.solve.x;
      view.width = tile.solve.width + 2 * r;
      view.height = tile.solve.height + 2 * r;
      view.stride = source.stride();
      view.valid_mask = mask;

      absl::StatusOr<OrdinalTile<T>> ordinal = OrdinalTransform(view);
      if (!ordinal.ok()) {
        unit_status[u] = AnnotateTile(ordinal.status(), tile);
        return;
      }
      const RowSolution* forwarded =
          tile.forwarded_from >= 0 ? &last_row : nullptr;
      absl::StatusOr<RowSolution> solved =
          ProcessTile(*ordinal, kernel, ranks.Offset(tile.solve.x, tile.solve.y),
                      forwarded, tile_output);
      if (!solved.ok()) {
        unit_status[u] = AnnotateTile(solved.status(), tile);
        return;
      }
      last_row = *std::move(solved);
      for (int y = tile.write_y; y < tile.solve.y + tile.solve.height; ++y) {
        const T* src = tile_output.row(y - tile.solve.y);
        std::copy(src, src + tile.solve.width, output.row(y) + tile.solve.x);
      }
    }
  });

  for (const absl::Status& status : unit_status) {
    if (!status.ok()) return status;
  }
  return output;
}

}  // namespace

absl::Status ValidateParams(const FilterParams& params) {
  if (absl::Status s = ValidateShapeSpec(params.shape); !s.ok()) return s;
  if (params.shape.radius > kMaxFilterRadius) {
    return absl::InvalidArgumentError(
        absl::StrCat("Radius ", params.shape.radius, " exceeds the maximum of ",
                     kMaxFilterRadius, " (input tiles are capped at ",
                     kMaxTileSide, " pixels)."));
  }
  if (!params.percentile_map.has_value() &&
      !(params.percentile >= 0.0 && params.percentile <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Percentile must be in [0, 1], got ", params.percentile));
  }
  if (params.percentile_map.has_value()) {
    for (const float p : params.percentile_map->pixels()) {
      if (!(p >= 0.0f && p <= 1.0f)) {
        return absl::InvalidArgumentError(
            absl::StrCat("Percentile map values must be in [0, 1], found ", p));
      }
    }
    if (params.percentile_map->channels() != 1) {
      return absl::InvalidArgumentError("Percentile map must be single-channel.");
    }
  }
  if (params.tile_size < 0 || params.tile_size == 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Tile size must be 0 (automatic) or at least 2, got ",
                     params.tile_size));
  }
  if (params.workers < 0) {
    return absl::InvalidArgumentError("Worker count must be non-negative.");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::pair<int, int>> OutputSize(int width, int height,
                                               const FilterParams& params) {
  if (width < 1 || height < 1) {
    return absl::InvalidArgumentError("Image is empty.");
  }
  if (params.boundary == BoundaryMode::kReplicate) {
    return std::make_pair(width, height);
  }
  const int r = params.shape.radius;
  if (width < 2 * r + 1 || height < 2 * r + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Valid-mode filtering needs at least ", 2 * r + 1, "x", 2 * r + 1,
        " pixels, got ", width, "x", height));
  }
  return std::make_pair(width - 2 * r, height - 2 * r);
}

absl::StatusOr<TileGrid> Decompose(int width, int height,
                                   const FilterParams& params) {
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  absl::StatusOr<std::pair<int, int>> out_size =
      OutputSize(width, height, params);
  if (!out_size.ok()) return out_size.status();

  const int r = params.shape.radius;
  const int requested =
      params.tile_size > 0 ? params.tile_size : kDefaultOutputTileSize;
  const int side = std::min(requested, kMaxTileSide - 2 * r);

  TileGrid grid;
  grid.output_width = out_size->first;
  grid.output_height = out_size->second;
  grid.radius = r;
  grid.output_tile_width = side;
  grid.output_tile_height = side;
  grid.input_tile_width = side + 2 * r;
  grid.input_tile_height = side + 2 * r;

  for (int x = 0; x < grid.output_width; x += side) {
    const int column = grid.num_columns++;
    const int w = std::min(side, grid.output_width - x);
    int y = 0;
    int above = -1;
    while (true) {
      Tile tile;
      tile.column = column;
      tile.solve = {x, y, w, std::min(side, grid.output_height - y)};
      tile.write_y = above >= 0 ? y + 1 : y;
      tile.forwarded_from = above;
      const int index = static_cast<int>(grid.tiles.size());
      if (above >= 0) grid.forwarding_edges.emplace_back(above, index);
      grid.tiles.push_back(tile);
      const int end = tile.solve.y + tile.solve.height;
      if (end >= grid.output_height) break;
      if (params.forwarding) {
        // The next tile re-solves this tile's last row as its seed row.
        y = end - 1;
        above = index;
      } else {
        y = end;
      }
    }
  }
  return grid;
}

template <PixelType T>
absl::StatusOr<Image<T>> PadImage(const Image<T>& image, int radius,
                                  BoundaryMode mode) {
  if (radius < 0) return absl::InvalidArgumentError("Negative pad radius.");
  if (image.empty()) return absl::InvalidArgumentError("Image is empty.");
  if (mode == BoundaryMode::kValid) {
    if (image.width() < 2 * radius + 1 || image.height() < 2 * radius + 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Valid-mode filtering needs at least ", 2 * radius + 1, "x",
          2 * radius + 1, " pixels, got ", image.width(), "x",
          image.height()));
    }
    return image;
  }
  const int channels = image.channels();
  Image<T> padded(image.width() + 2 * radius, image.height() + 2 * radius,
                  channels);
  for (int y = 0; y < padded.height(); ++y) {
    const int sy = std::clamp(y - radius, 0, image.height() - 1);
    for (int x = 0; x < padded.width(); ++x) {
      const int sx = std::clamp(x - radius, 0, image.width() - 1);
      for (int c = 0; c < channels; ++c) {
        padded.at(x, y, c) = image.at(sx, sy, c);
      }
    }
  }
  return padded;
}

template absl::StatusOr<Image<uint8_t>> PadImage(const Image<uint8_t>&, int,
                                                 BoundaryMode);
template absl::StatusOr<Image<uint16_t>> PadImage(const Image<uint16_t>&, int,
                                                  BoundaryMode);
template absl::StatusOr<Image<float>> PadImage(const Image<float>&, int,
                                               BoundaryMode);

template <PixelType T>
absl::StatusOr<Image<T>> FilterImage(const Image<T>& image,
                                     const FilterParams& params) {
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  absl::StatusOr<KernelShape> kernel = MakeKernel(params.shape);
  if (!kernel.ok()) return kernel.status();
  if (params.percentile_map.has_value()) {
    absl::StatusOr<std::pair<int, int>> out_size =
        OutputSize(image.width(), image.height(), params);
    if (!out_size.ok()) return out_size.status();
    if (params.percentile_map->width() != out_size->first ||
        params.percentile_map->height() != out_size->second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Percentile map is ", params.percentile_map->width(), "x",
          params.percentile_map->height(), " but the output is ",
          out_size->first, "x", out_size->second));
    }
  }
  if constexpr (std::is_same_v<T, float>) {
    // Screened up front so the diagnostic names image coordinates rather
    // than a position inside a padded tile.
    for (int y = 0; y < image.height(); ++y) {
      const float* row = image.row(y);
      for (int i = 0; i < image.stride(); ++i) {
        if (std::isnan(row[i])) {
          return absl::InvalidArgumentError(absl::StrCat(
              "NaN pixel at (", i / image.channels(), ", ", y,
              "); NaN inputs are not supported."));
        }
      }
    }
  }
  if (image.channels() == 1) return FilterPlane(image, params, *kernel);

  Image<T> output;
  for (int c = 0; c < image.channels(); ++c) {
    absl::StatusOr<Image<T>> plane =
        FilterPlane(ExtractChannel(image, c), params, *kernel);
    if (!plane.ok()) return plane.status();
    if (c == 0) output = Image<T>(plane->width(), plane->height(), image.channels());
    InsertChannel(*plane, c, output);
  }
  return output;
}

template absl::StatusOr<Image<uint8_t>> FilterImage(const Image<uint8_t>&,
                                                    const FilterParams&);
template absl::StatusOr<Image<uint16_t>> FilterImage(const Image<uint16_t>&,
                                                     const FilterParams&);
template absl::StatusOr<Image<float>> FilterImage(const Image<float>&,
                                                  const FilterParams&);

}  // namespace isomedian
