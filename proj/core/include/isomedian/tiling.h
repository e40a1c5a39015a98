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

#ifndef ISOMEDIAN_TILING_H_
#define ISOMEDIAN_TILING_H_

#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "isomedian/image.h"
#include "isomedian/kernel_geometry.h"

namespace isomedian {

// Largest radius for which an 8-pixel output tile still fits the 256-pixel
// input tile cap.
inline constexpr int kMaxFilterRadius = 124;
inline constexpr int kDefaultOutputTileSize = 64;

enum class BoundaryMode {
  kReplicate,  // Edge pixels extended outward; output has the input size.
  kValid,      // No padding; output shrinks by 2r per dimension.
};

struct FilterParams {
  ShapeSpec shape;
  // Fraction in [0, 1]; 0.5 is the median.
  double percentile = 0.5;
  // Optional per-output-pixel percentile (fractions in [0, 1]); overrides
  // `percentile`. Must match the output dimensions.
  std::optional<Image<float>> percentile_map;
  BoundaryMode boundary = BoundaryMode::kReplicate;
  // Seed each tile's first row from the tile above it.
  bool forwarding = true;
  // Output tile side; 0 selects min(64, 256 - 2r).
  int tile_size = 0;
  // Worker threads; 0 uses the hardware concurrency.
  int workers = 0;
  // Circular kernels only: leave input-tile corners that no window can reach
  // out of the ordinal transform.
  bool rounded_footprint = false;
};

absl::Status ValidateParams(const FilterParams& params);

// Output dimensions for an input of the given size, or an error in valid
// mode when the input is smaller than one window.
absl::StatusOr<std::pair<int, int>> OutputSize(int width, int height,
                                               const FilterParams& params);

struct TileRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

struct Tile {
  int column = 0;
  // Output rows and columns the tile solves, in output coordinates. The
  // matching input tile is `solve` grown by r on every side of the padded
  // image.
  TileRect solve;
  // First output row the tile writes. Equals solve.y unless the tile is
  // seeded from the one above, in which case its first row belongs to the
  // upper tile and is only used as seed data.
  int write_y = 0;
  // Index of the tile directly above whose last row seeds this one, or -1.
  int forwarded_from = -1;
};

struct TileGrid {
  int output_width = 0;
  int output_height = 0;
  int radius = 0;
  int output_tile_width = 0;
  int output_tile_height = 0;
  int input_tile_width = 0;   // output_tile_width + 2r, at most 256.
  int input_tile_height = 0;
  int num_columns = 0;
  // Grouped by column, top to bottom within each column.
  std::vector<Tile> tiles;
  // (upper, lower) tile index pairs; present only with forwarding.
  std::vector<std::pair<int, int>> forwarding_edges;
};

// Splits an image of the given input size into tiles. With forwarding,
// vertically adjacent tiles of a column share one solved row.
absl::StatusOr<TileGrid> Decompose(int width, int height,
                                   const FilterParams& params);

// Replicate mode extends edge pixels outward by `radius`; valid mode returns
// the image unchanged (and rejects images smaller than 2r + 1).
template <PixelType T>
absl::StatusOr<Image<T>> PadImage(const Image<T>& image, int radius,
                                  BoundaryMode mode);

// Percentile-filters every channel of `image`. The result does not depend on
// the worker count, tile size or forwarding setting.
template <PixelType T>
absl::StatusOr<Image<T>> FilterImage(const Image<T>& image,
                                     const FilterParams& params);

}  // namespace isomedian

#endif  // ISOMEDIAN_TILING_H_
