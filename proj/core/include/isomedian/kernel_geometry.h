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

#ifndef ISOMEDIAN_KERNEL_GEOMETRY_H_
#define ISOMEDIAN_KERNEL_GEOMETRY_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace isomedian {

enum class ShapeKind { kCircle, kSquare, kRegularPolygon };

// Analytic description of a convex filter kernel. The nominal radius is in
// pixels; circles and polygons are rasterized with an effective radius of
// radius + 0.5, so a radius-2 circle is the 21-tap 5x5-minus-corners kernel.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::kCircle;
  int radius = 0;
  // Regular polygon only.
  int sides = 0;
  double rotation_deg = 0.0;

  static ShapeSpec Circle(int radius) {
    return {ShapeKind::kCircle, radius, 0, 0.0};
  }
  static ShapeSpec Square(int radius) {
    return {ShapeKind::kSquare, radius, 0, 0.0};
  }
  static ShapeSpec Polygon(int radius, int sides, double rotation_deg = 0.0) {
    return {ShapeKind::kRegularPolygon, radius, sides, rotation_deg};
  }
};

inline constexpr int kMaxPolygonSides = 64;

absl::Status ValidateShapeSpec(const ShapeSpec& spec);

// Membership predicate in centered offset coordinates. Circles use
// dx^2 + dy^2 <= (r + 0.5)^2; squares |dx|, |dy| <= r; regular polygons a
// half-plane test against the k-gon of circumradius r + 0.5, boundary
// inclusive. The polygon's first vertex sits at `rotation_deg` measured from
// the +x axis toward +y (image rows grow downward).
bool Contains(const ShapeSpec& spec, int dx, int dy);

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

// Half-open column interval [lo, hi) of one kernel row. Empty when lo == hi.
struct RowSpan {
  int lo = 0;
  int hi = 0;
  bool empty() const { return lo >= hi; }
  int width() const { return hi - lo; }
};

// Inclusive row interval [top, bottom] of one kernel column.
struct ColumnExtent {
  int top = 0;
  int bottom = -1;
  bool empty() const { return top > bottom; }
};

// Offsets, relative to the pre-slide center, of pixels entering and leaving
// the window when it moves by one pixel.
struct SlideDeltas {
  std::vector<Offset> enter;
  std::vector<Offset> exit;
};

// Rasterized kernel. Immutable after construction.
class KernelShape {
 public:
  const ShapeSpec& spec() const { return spec_; }
  int radius() const { return spec_.radius; }
  int area() const { return area_; }

  // dy and dx range over [-radius, radius].
  RowSpan row_span(int dy) const { return spans_[dy + spec_.radius]; }
  ColumnExtent column_extent(int dx) const {
    return columns_[dx + spec_.radius];
  }
  std::span<const RowSpan> row_spans() const { return spans_; }
  std::span<const ColumnExtent> column_extents() const { return columns_; }

  // Rightward and downward one-pixel slides.
  const SlideDeltas& h_deltas() const { return h_deltas_; }
  const SlideDeltas& v_deltas() const { return v_deltas_; }

  // All member offsets in row-major order.
  std::span<const Offset> offsets() const { return offsets_; }

  // Equivalent to isomedian::Contains(spec(), dx, dy), via the span table.
  bool Contains(int dx, int dy) const {
    const int r = spec_.radius;
    if (dy < -r || dy > r) return false;
    const RowSpan s = spans_[dy + r];
    return dx >= s.lo && dx < s.hi;
  }

  // For circles: the integer bound on dx^2 + dy^2 equivalent to the
  // (r + 0.5)^2 test, i.e. r^2 + r.
  int circle_threshold() const { return spec_.radius * (spec_.radius + 1); }

 private:
  friend absl::StatusOr<KernelShape> MakeKernel(const ShapeSpec& spec);

  ShapeSpec spec_;
  int area_ = 0;
  std::vector<RowSpan> spans_;
  std::vector<ColumnExtent> columns_;
  SlideDeltas h_deltas_;
  SlideDeltas v_deltas_;
  std::vector<Offset> offsets_;
};

// Rasterizes `spec`. Rejects invalid specs and polygons with more than
// kMaxPolygonSides sides.
absl::StatusOr<KernelShape> MakeKernel(const ShapeSpec& spec);

// 0-based rank selected by `percentile` in a window of `area` pixels:
// clamp(floor(percentile * (area - 1) + 0.5), 0, area - 1). The median of a
// 7x7 window is rank 24.
absl::StatusOr<int> TargetRank(int area, double percentile);

// Unchecked variant for hot loops; requires area >= 1 and percentile in
// [0, 1].
int TargetRankUnchecked(int area, double percentile);

}  // namespace isomedian

#endif  // ISOMEDIAN_KERNEL_GEOMETRY_H_
