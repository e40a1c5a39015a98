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

#include "isomedian/kernel_geometry.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace isomedian {
namespace {

bool PolygonContains(const ShapeSpec& spec, int dx, int dy) {
  const double circumradius = spec.radius + 0.5;
  const double step = 2.0 * std::numbers::pi / spec.sides;
  const double start = spec.rotation_deg * std::numbers::pi / 180.0;
  // Vertices are generated with increasing angle, so every edge has the
  // interior on its left (non-negative cross product).
  constexpr double kEpsilon = 1e-9;
  double x0 = circumradius * std::cos(start);
  double y0 = circumradius * std::sin(start);
  for (int k = 1; k <= spec.sides; ++k) {
    const double angle = start + step * k;
    const double x1 = circumradius * std::cos(angle);
    const double y1 = circumradius * std::sin(angle);
    const double cross = (x1 - x0) * (dy - y0) - (y1 - y0) * (dx - x0);
    if (cross < -kEpsilon * circumradius) return false;
    x0 = x1;
    y0 = y1;
  }
  return true;
}

}  // namespace

absl::Status ValidateShapeSpec(const ShapeSpec& spec) {
  if (spec.radius < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Kernel radius must be non-negative, got ", spec.radius));
  }
  if (spec.kind == ShapeKind::kRegularPolygon) {
    if (spec.sides < 3) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Regular polygon needs at least 3 sides, got ", spec.sides));
    }
    if (spec.sides > kMaxPolygonSides) {
      return absl::InvalidArgumentError(
          absl::StrCat("Regular polygon sides limited to ", kMaxPolygonSides,
                       ", got ", spec.sides));
    }
    if (!std::isfinite(spec.rotation_deg)) {
      return absl::InvalidArgumentError("Polygon rotation must be finite.");
    }
  }
  return absl::OkStatus();
}

bool Contains(const ShapeSpec& spec, int dx, int dy) {
  const int r = spec.radius;
  if (std::abs(dx) > r || std::abs(dy) > r) return false;
  switch (spec.kind) {
    case ShapeKind::kCircle:
      // (r + 0.5)^2 = r^2 + r + 0.25, and the left side is an integer.
      return dx * dx + dy * dy <= r * r + r;
    case ShapeKind::kSquare:
      return true;
    case ShapeKind::kRegularPolygon:
      return PolygonContains(spec, dx, dy);
  }
  return false;
}

absl::StatusOr<KernelShape> MakeKernel(const ShapeSpec& spec) {
  if (absl::Status status = ValidateShapeSpec(spec); !status.ok()) {
    return status;
  }
  const int r = spec.radius;
  const int diameter = 2 * r + 1;
  KernelShape kernel;
  kernel.spec_ = spec;
  kernel.spans_.resize(diameter);
  kernel.columns_.resize(diameter);

  for (int dy = -r; dy <= r; ++dy) {
    int lo = r + 1;
    int hi = -r;
    int members = 0;
    for (int dx = -r; dx <= r; ++dx) {
      if (!Contains(spec, dx, dy)) continue;
      lo = std::min(lo, dx);
      hi = std::max(hi, dx + 1);
      ++members;
      kernel.offsets_.push_back({dx, dy});
      ColumnExtent& col = kernel.columns_[dx + r];
      if (col.empty()) {
        col.top = dy;
        col.bottom = dy;
      } else {
        col.bottom = dy;
      }
    }
    if (members == 0) {
      kernel.spans_[dy + r] = {0, 0};
      continue;
    }
    if (hi - lo != members) {
      return absl::InternalError(
          absl::StrCat("Kernel row ", dy, " is not contiguous."));
    }
    kernel.spans_[dy + r] = {lo, hi};
    kernel.area_ += members;
  }

  for (int dy = -r; dy <= r; ++dy) {
    const RowSpan s = kernel.spans_[dy + r];
    if (s.empty()) continue;
    kernel.h_deltas_.enter.push_back({s.hi, dy});
    kernel.h_deltas_.exit.push_back({s.lo, dy});
  }
  for (int dx = -r; dx <= r; ++dx) {
    const ColumnExtent c = kernel.columns_[dx + r];
    if (c.empty()) continue;
    if (c.bottom - c.top + 1 !=
        static_cast<int>(std::count_if(
            kernel.offsets_.begin(), kernel.offsets_.end(),
            [dx](const Offset& o) { return o.dx == dx; }))) {
      return absl::InternalError(
          absl::StrCat("Kernel column ", dx, " is not contiguous."));
    }
    kernel.v_deltas_.enter.push_back({dx, c.bottom + 1});
    kernel.v_deltas_.exit.push_back({dx, c.top});
  }
  return kernel;
}

int TargetRankUnchecked(int area, double percentile) {
  const int rank = static_cast<int>(std::floor(percentile * (area - 1) + 0.5));
  return std::clamp(rank, 0, area - 1);
}

absl::StatusOr<int> TargetRank(int area, double percentile) {
  if (area < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Kernel area must be positive, got ", area));
  }
  if (!(percentile >= 0.0 && percentile <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Percentile must be in [0, 1], got ", percentile));
  }
  return TargetRankUnchecked(area, percentile);
}

}  // namespace isomedian
