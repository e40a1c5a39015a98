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

// Per-tile solver. Every output pixel of a tile is solved in the ordinal
// domain with a pivot/count pair: the pivot is a multiple of 64 near the
// previous solution and the count is the number of window pixels whose
// ordinal is strictly below it. Sliding the window by one pixel adjusts the
// count by comparing entering and exiting pixels against the pivot, after
// which the omnigram is scanned from the pivot, one 64-entry segment at a
// time, until the target rank is reached.
//
// The top row of a tile is seeded from a coarse histogram of the first window
// and then solved by sliding right; all columns are then slid down together.
// The last row's solutions can be forwarded to the tile below, since the
// offset of a median pixel from its window center does not depend on which
// tile the window is solved in.

#ifndef ISOMEDIAN_FILTER_CORE_H_
#define ISOMEDIAN_FILTER_CORE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "isomedian/image.h"
#include "isomedian/kernel_geometry.h"
#include "isomedian/ordinal.h"

namespace isomedian {

// Cursor for one output column.
struct WindowState {
  Point center;         // Tile-local window center.
  int pivot = 0;        // Multiple of kSegmentSize.
  int count = 0;        // Window pixels with ordinal < pivot.
  int last_median = 0;  // Most recent solution.
  int target = 0;       // 0-based rank being selected.
};

struct MedianSolution {
  int median = 0;  // Ordinal.
  int dx = 0;      // Offset of the median pixel from the window center.
  int dy = 0;
  int pivot = 0;
  int count = 0;
};

// Solutions for one output row, one entry per output column.
using RowSolution = std::vector<MedianSolution>;

// Per-output-pixel target rank, in tile-local output coordinates.
class RankMap {
 public:
  static RankMap Constant(int rank) { return RankMap(rank, nullptr, 0); }
  // `ranks` must outlive the map. Element (x, y) is ranks[y * stride + x].
  static RankMap PerPixel(const int32_t* ranks, ptrdiff_t stride) {
    return RankMap(0, ranks, stride);
  }

  int at(int x, int y) const {
    return ranks_ == nullptr ? constant_ : ranks_[y * stride_ + x];
  }
  bool is_constant() const { return ranks_ == nullptr; }
  // Same map shifted so that (x0, y0) becomes the origin.
  RankMap Offset(int x0, int y0) const {
    return ranks_ == nullptr ? *this
                             : RankMap(0, ranks_ + y0 * stride_ + x0, stride_);
  }

 private:
  RankMap(int constant, const int32_t* ranks, ptrdiff_t stride)
      : constant_(constant), ranks_(ranks), stride_(stride) {}

  int constant_;
  const int32_t* ranks_;
  ptrdiff_t stride_;
};

// Nearest multiple of 64 to `median`, halves rounding up, clamped to the last
// segment base 64 * floor((size - 1) / 64).
int SelectPivot(int median, int size);

// Solves the window at `center` from scratch through a 64-bin coarse
// histogram of its ordinals. The window must lie inside the tile.
absl::StatusOr<WindowState> SolveSeed(const OrdinalIndex& index,
                                      const KernelShape& kernel, Point center,
                                      int target);

// Moves the window one pixel right (direction +1) or left (-1), keeping the
// pivot and updating the count.
void SlideHorizontal(WindowState& state, const OrdinalIndex& index,
                     const KernelShape& kernel, int direction = 1);

// Moves every window one pixel down. Identical to updating each state on its
// own through the kernel's vertical deltas.
void SlideVerticalRow(std::span<WindowState> states, const OrdinalIndex& index,
                      const KernelShape& kernel);

// Finds the ordinal at rank state.target by scanning the omnigram from the
// pivot, then re-anchors the pivot near the result with a matching count.
// Fails with an internal error if the count was inconsistent and the scan ran
// off either end of the omnigram.
absl::StatusOr<int> Refine(WindowState& state, const OrdinalIndex& index,
                           const KernelShape& kernel);

// Initial top-row states for a tile whose first output row is the last
// output row of `previous`, the tile directly above in the same column.
// Returns one state per column, each already refined (last_median set).
absl::StatusOr<std::vector<WindowState>> ForwardSolutions(
    const RowSolution& previous, const OrdinalIndex& next,
    const KernelShape& kernel, const RankMap& ranks);

// Filters one ordinal tile. The output is (width - 2r) x (height - 2r) and
// output pixel (x, y) is the window centered at tile pixel (x + r, y + r).
// When `forwarded` is given it seeds the first output row. Returns the
// solutions of the last output row.
template <PixelType T>
absl::StatusOr<RowSolution> ProcessTile(const OrdinalTile<T>& tile,
                                        const KernelShape& kernel,
                                        const RankMap& ranks,
                                        const RowSolution* forwarded,
                                        Image<T>& output);

// Runs ProcessTile once per percentile (each in [0, 1]) over the same ordinal
// tile.
template <PixelType T>
absl::StatusOr<std::vector<Image<T>>> BracketFilter(
    const OrdinalTile<T>& tile, const KernelShape& kernel,
    std::span<const double> percentiles);

}  // namespace isomedian

#endif  // ISOMEDIAN_FILTER_CORE_H_
