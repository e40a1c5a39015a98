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

#include "isomedian/filter_core.h"

#include <algorithm>
#include <bit>

#include "absl/strings/str_cat.h"
#include "membership.h"

namespace isomedian {
namespace {

using internal::SegmentBits;
using internal::ValidBits;
using internal::WithMembership;

// Position of the n-th (0-based) set bit of `mask`.
int NthSetBit(uint64_t mask, int n) {
  for (int i = 0; i < n; ++i) mask &= mask - 1;
  return std::countr_zero(mask);
}

// Moves the pivot to the multiple of 64 nearest `median`, which lies in
// `segment`. On entry `count` is the count at the segment base; the only
// other candidate is the next base, whose count includes the whole segment.
void Reanchor(int median, int segment, int segment_pop, int size, int& pivot,
              int& count) {
  const int new_pivot = SelectPivot(median, size);
  if (new_pivot != segment * kSegmentSize) count += segment_pop;
  pivot = new_pivot;
}

// Scans the omnigram from `pivot` for the ordinal at rank `target`. Returns
// -1 if the scan leaves the omnigram, which means `count` was wrong.
template <typename Membership>
int RefineScan(const uint16_t* omnigram, int size, int target, int& pivot,
               int& count, const Membership& member) {
  const int num_segments = (size + kSegmentSize - 1) / kSegmentSize;
  int segment = pivot / kSegmentSize;
  if (count <= target) {
    for (; segment < num_segments; ++segment) {
      const uint64_t mask =
          SegmentBits(omnigram + segment * kSegmentSize, member) &
          ValidBits(segment, size);
      const int pop = std::popcount(mask);
      if (count + pop > target) {
        const int median =
            segment * kSegmentSize + NthSetBit(mask, target - count);
        Reanchor(median, segment, pop, size, pivot, count);
        return median;
      }
      count += pop;
    }
  } else {
    for (--segment; segment >= 0; --segment) {
      const uint64_t mask =
          SegmentBits(omnigram + segment * kSegmentSize, member) &
          ValidBits(segment, size);
      const int pop = std::popcount(mask);
      count -= pop;
      if (count <= target) {
        const int median =
            segment * kSegmentSize + NthSetBit(mask, target - count);
        Reanchor(median, segment, pop, size, pivot, count);
        return median;
      }
    }
  }
  return -1;
}

absl::Status ScanExhausted(Point center, int target) {
  return absl::InternalError(absl::StrCat(
      "Omnigram scan exhausted without reaching rank ", target,
      " for window at (", center.x, ", ", center.y,
      "); pivot count is inconsistent."));
}

// Adds (entering < pivot) - (exiting < pivot) over every kernel column for a
// row of windows moving from center row `center_y` to `center_y + 1`. Window
// k is centered at column `first_center_x + k`.
void VerticalCountUpdate(const OrdinalIndex& index, const KernelShape& kernel,
                         int center_y, int first_center_x,
                         std::span<const int> pivots, std::span<int> counts) {
  const int r = kernel.radius();
  const int n = static_cast<int>(counts.size());
  const int* pivot = pivots.data();
  int* count = counts.data();
  for (int dx = -r; dx <= r; ++dx) {
    const ColumnExtent extent = kernel.column_extent(dx);
    if (extent.empty()) continue;
    const uint16_t* exiting =
        index.ordinal_row(center_y + extent.top) + first_center_x + dx;
    const uint16_t* entering =
        index.ordinal_row(center_y + extent.bottom + 1) + first_center_x + dx;
    for (int k = 0; k < n; ++k) {
      count[k] += static_cast<int>(entering[k] < pivot[k]) -
                  static_cast<int>(exiting[k] < pivot[k]);
    }
  }
}

absl::Status CheckWindowInside(const OrdinalIndex& index,
                               const KernelShape& kernel, Point center) {
  const int r = kernel.radius();
  if (center.x - r < 0 || center.y - r < 0 || center.x + r >= index.width() ||
      center.y + r >= index.height()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Window at (", center.x, ", ", center.y, ") with radius ", r,
        " does not fit in a ", index.width(), "x", index.height(), " tile."));
  }
  return absl::OkStatus();
}

// Fills `medians` (out_w x out_h, row-major) with the solved ordinals of one
// tile and returns the last row's solutions.
template <typename MakeMembership>
absl::StatusOr<RowSolution> SolveTile(const OrdinalIndex& index,
                                      const KernelShape& kernel,
                                      const RankMap& ranks,
                                      const RowSolution* forwarded,
                                      const MakeMembership& make_member,
                                      std::vector<uint16_t>& medians) {
  const int r = kernel.radius();
  const int out_w = index.width() - 2 * r;
  const int out_h = index.height() - 2 * r;
  const int size = index.size();
  const uint16_t* omnigram = index.omnigram_data();
  medians.resize(static_cast<size_t>(out_w) * out_h);

  std::vector<int> pivot(out_w);
  std::vector<int> count(out_w);

  if (forwarded != nullptr) {
    absl::StatusOr<std::vector<WindowState>> states =
        ForwardSolutions(*forwarded, index, kernel, ranks);
    if (!states.ok()) return states.status();
    for (int x = 0; x < out_w; ++x) {
      const WindowState& s = (*states)[x];
      pivot[x] = s.pivot;
      count[x] = s.count;
      medians[x] = static_cast<uint16_t>(s.last_median);
    }
  } else {
    absl::StatusOr<WindowState> seed =
        SolveSeed(index, kernel, {r, r}, ranks.at(0, 0));
    if (!seed.ok()) return seed.status();
    WindowState state = *seed;
    pivot[0] = state.pivot;
    count[0] = state.count;
    medians[0] = static_cast<uint16_t>(state.last_median);
    for (int x = 1; x < out_w; ++x) {
      SlideHorizontal(state, index, kernel);
      const int target = ranks.at(x, 0);
      const int median = RefineScan(omnigram, size, target, state.pivot,
                                    state.count, make_member(state.center));
      if (median < 0) return ScanExhausted(state.center, target);
      pivot[x] = state.pivot;
      count[x] = state.count;
      medians[x] = static_cast<uint16_t>(median);
    }
  }

  for (int y = 1; y < out_h; ++y) {
    VerticalCountUpdate(index, kernel, y - 1 + r, r, pivot, count);
    uint16_t* row = medians.data() + static_cast<size_t>(y) * out_w;
    for (int x = 0; x < out_w; ++x) {
      const Point center{x + r, y + r};
      const int target = ranks.at(x, y);
      const int median = RefineScan(omnigram, size, target, pivot[x],
                                    count[x], make_member(center));
      if (median < 0) return ScanExhausted(center, target);
      row[x] = static_cast<uint16_t>(median);
    }
  }

  RowSolution last_row(out_w);
  const uint16_t* last = medians.data() + static_cast<size_t>(out_h - 1) * out_w;
  for (int x = 0; x < out_w; ++x) {
    const uint16_t packed = omnigram[last[x]];
    last_row[x] = {last[x], CoordX(packed) - (x + r),
                   CoordY(packed) - (out_h - 1 + r), pivot[x], count[x]};
  }
  return last_row;
}

absl::StatusOr<RowSolution> SolveTileDispatch(const OrdinalIndex& index,
                                              const KernelShape& kernel,
                                              const RankMap& ranks,
                                              const RowSolution* forwarded,
                                              std::vector<uint16_t>& medians) {
  const int r = kernel.radius();
  switch (kernel.spec().kind) {
    case ShapeKind::kCircle: {
      const int threshold = kernel.circle_threshold();
      return SolveTile(
          index, kernel, ranks, forwarded,
          [threshold](Point c) {
            return internal::CircleMembership{c.x, c.y, threshold};
          },
          medians);
    }
    case ShapeKind::kSquare:
      return SolveTile(
          index, kernel, ranks, forwarded,
          [r](Point c) { return internal::SquareMembership{c.x, c.y, r}; },
          medians);
    case ShapeKind::kRegularPolygon:
      break;
  }
  const RowSpan* spans = kernel.row_spans().data();
  return SolveTile(
      index, kernel, ranks, forwarded,
      [r, spans](Point c) {
        return internal::SpanMembership{c.x, c.y, r, spans};
      },
      medians);
}

}  // namespace

int SelectPivot(int median, int size) {
  const int rounded =
      (median + kSegmentSize / 2) / kSegmentSize * kSegmentSize;
  const int cap = std::max(0, (size - 1) / kSegmentSize * kSegmentSize);
  return std::min(rounded, cap);
}

absl::StatusOr<WindowState> SolveSeed(const OrdinalIndex& index,
                                      const KernelShape& kernel, Point center,
                                      int target) {
  if (absl::Status s = CheckWindowInside(index, kernel, center); !s.ok()) {
    return s;
  }
  if (target < 0 || target >= kernel.area()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Target rank ", target, " outside kernel area ", kernel.area()));
  }
  std::vector<int> bins(index.num_segments(), 0);
  for (const Offset& o : kernel.offsets()) {
    ++bins[index.ordinal(center.x + o.dx, center.y + o.dy) / kSegmentSize];
  }
  WindowState state;
  state.center = center;
  state.target = target;
  int below = 0;
  for (int b = 0; b < static_cast<int>(bins.size()); ++b) {
    if (below + bins[b] > target) {
      state.pivot = b * kSegmentSize;
      state.count = below;
      break;
    }
    below += bins[b];
  }
  absl::StatusOr<int> median = Refine(state, index, kernel);
  if (!median.ok()) return median.status();
  return state;
}

void SlideHorizontal(WindowState& state, const OrdinalIndex& index,
                     const KernelShape& kernel, int direction) {
  const Point c = state.center;
  int count = state.count;
  if (direction > 0) {
    const SlideDeltas& deltas = kernel.h_deltas();
    for (const Offset& o : deltas.enter) {
      count += index.ordinal(c.x + o.dx, c.y + o.dy) < state.pivot;
    }
    for (const Offset& o : deltas.exit) {
      count -= index.ordinal(c.x + o.dx, c.y + o.dy) < state.pivot;
    }
    state.center.x += 1;
  } else {
    const int r = kernel.radius();
    for (int dy = -r; dy <= r; ++dy) {
      const RowSpan s = kernel.row_span(dy);
      if (s.empty()) continue;
      count += index.ordinal(c.x + s.lo - 1, c.y + dy) < state.pivot;
      count -= index.ordinal(c.x + s.hi - 1, c.y + dy) < state.pivot;
    }
    state.center.x -= 1;
  }
  state.count = count;
}

void SlideVerticalRow(std::span<WindowState> states, const OrdinalIndex& index,
                      const KernelShape& kernel) {
  const SlideDeltas& deltas = kernel.v_deltas();
  for (WindowState& state : states) {
    const Point c = state.center;
    for (const Offset& o : deltas.enter) {
      state.count += index.ordinal(c.x + o.dx, c.y + o.dy) < state.pivot;
    }
    for (const Offset& o : deltas.exit) {
      state.count -= index.ordinal(c.x + o.dx, c.y + o.dy) < state.pivot;
    }
    state.center.y += 1;
  }
}

absl::StatusOr<int> Refine(WindowState& state, const OrdinalIndex& index,
                           const KernelShape& kernel) {
  const int median = WithMembership(kernel, state.center, [&](const auto& m) {
    return RefineScan(index.omnigram_data(), index.size(), state.target,
                      state.pivot, state.count, m);
  });
  if (median < 0) return ScanExhausted(state.center, state.target);
  state.last_median = median;
  return median;
}

absl::StatusOr<std::vector<WindowState>> ForwardSolutions(
    const RowSolution& previous, const OrdinalIndex& next,
    const KernelShape& kernel, const RankMap& ranks) {
  const int r = kernel.radius();
  const int out_w = next.width() - 2 * r;
  if (static_cast<int>(previous.size()) != out_w || next.height() < 2 * r + 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Forwarded row has ", previous.size(),
        " columns but the next tile's first output row has ", out_w,
        "; tiles must share an overlapping output row."));
  }
  const uint16_t* omnigram = next.omnigram_data();
  std::vector<WindowState> states(out_w);
  for (int x = 0; x < out_w; ++x) {
    const MedianSolution& solution = previous[x];
    const Point center{x + r, r};
    const int px = center.x + solution.dx;
    const int py = center.y + solution.dy;
    if (!kernel.Contains(solution.dx, solution.dy) || !next.participates(px, py)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Forwarded median offset (", solution.dx, ", ", solution.dy,
          ") for column ", x, " is not inside the next tile's window."));
    }
    const int median = next.ordinal(px, py);
    const int target = ranks.at(x, 0);
    const int pivot = SelectPivot(median, next.size());
    // `median` has exactly `target` window members below it.
    int count = target;
    WithMembership(kernel, center, [&](const auto& member) {
      if (pivot > median) {
        for (int v = median; v < pivot; ++v) count += member(omnigram[v]);
      } else {
        for (int v = pivot; v < median; ++v) count -= member(omnigram[v]);
      }
    });
    states[x] = {center, pivot, count, median, target};
  }
  return states;
}

template <PixelType T>
absl::StatusOr<RowSolution> ProcessTile(const OrdinalTile<T>& tile,
                                        const KernelShape& kernel,
                                        const RankMap& ranks,
                                        const RowSolution* forwarded,
                                        Image<T>& output) {
  const int r = kernel.radius();
  const int out_w = tile.width() - 2 * r;
  const int out_h = tile.height() - 2 * r;
  if (out_w < 1 || out_h < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Tile ", tile.width(), "x", tile.height(),
        " is too small for radius ", r));
  }
  std::vector<uint16_t> medians;
  absl::StatusOr<RowSolution> last_row =
      SolveTileDispatch(tile.index(), kernel, ranks, forwarded, medians);
  if (!last_row.ok()) return last_row.status();

  if (output.width() != out_w || output.height() != out_h ||
      output.channels() != 1) {
    output = Image<T>(out_w, out_h);
  }
  const std::span<const T> reverse_map = tile.reverse_map();
  for (int y = 0; y < out_h; ++y) {
    const uint16_t* src = medians.data() + static_cast<size_t>(y) * out_w;
    T* dst = output.row(y);
    for (int x = 0; x < out_w; ++x) dst[x] = reverse_map[src[x]];
  }
  return last_row;
}

template absl::StatusOr<RowSolution> ProcessTile(const OrdinalTile<uint8_t>&,
                                                 const KernelShape&,
                                                 const RankMap&,
                                                 const RowSolution*,
                                                 Image<uint8_t>&);
template absl::StatusOr<RowSolution> ProcessTile(const OrdinalTile<uint16_t>&,
                                                 const KernelShape&,
                                                 const RankMap&,
                                                 const RowSolution*,
                                                 Image<uint16_t>&);
template absl::StatusOr<RowSolution> ProcessTile(const OrdinalTile<float>&,
                                                 const KernelShape&,
                                                 const RankMap&,
                                                 const RowSolution*,
                                                 Image<float>&);

template <PixelType T>
absl::StatusOr<std::vector<Image<T>>> BracketFilter(
    const OrdinalTile<T>& tile, const KernelShape& kernel,
    std::span<const double> percentiles) {
  if (percentiles.empty()) {
    return absl::InvalidArgumentError("Percentile list is empty.");
  }
  std::vector<Image<T>> outputs;
  outputs.reserve(percentiles.size());
  for (const double percentile : percentiles) {
    absl::StatusOr<int> rank = TargetRank(kernel.area(), percentile);
    if (!rank.ok()) return rank.status();
    Image<T> output;
    absl::StatusOr<RowSolution> solved = ProcessTile(
        tile, kernel, RankMap::Constant(*rank), nullptr, output);
    if (!solved.ok()) return solved.status();
    outputs.push_back(std::move(output));
  }
  return outputs;
}

template absl::StatusOr<std::vector<Image<uint8_t>>> BracketFilter(
    const OrdinalTile<uint8_t>&, const KernelShape&, std::span<const double>);
template absl::StatusOr<std::vector<Image<uint16_t>>> BracketFilter(
    const OrdinalTile<uint16_t>&, const KernelShape&, std::span<const double>);
template absl::StatusOr<std::vector<Image<float>>> BracketFilter(
    const OrdinalTile<float>&, const KernelShape&, std::span<const double>);

}  // namespace isomedian
