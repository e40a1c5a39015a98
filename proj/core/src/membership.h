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

// Window-membership tests on packed omnigram coordinates, specialized per
// kernel kind so the segment scan stays branch-free.

#ifndef ISOMEDIAN_SRC_MEMBERSHIP_H_
#define ISOMEDIAN_SRC_MEMBERSHIP_H_

#include <cstdint>

#include "isomedian/kernel_geometry.h"
#include "isomedian/ordinal.h"

namespace isomedian::internal {

struct CircleMembership {
  int cx;
  int cy;
  int threshold;
  bool operator()(uint16_t packed) const {
    const int dx = CoordX(packed) - cx;
    const int dy = CoordY(packed) - cy;
    return dx * dx + dy * dy <= threshold;
  }
};

struct SquareMembership {
  int cx;
  int cy;
  int radius;
  bool operator()(uint16_t packed) const {
    const unsigned dx = CoordX(packed) - cx + radius;
    const unsigned dy = CoordY(packed) - cy + radius;
    return (dx <= 2u * radius) & (dy <= 2u * radius);
  }
};

// Generic convex kernel via its row-span table.
struct SpanMembership {
  int cx;
  int cy;
  int radius;
  const RowSpan* spans;
  bool operator()(uint16_t packed) const {
    const int dy = CoordY(packed) - cy;
    if (static_cast<unsigned>(dy + radius) > 2u * radius) return false;
    const RowSpan s = spans[dy + radius];
    const int dx = CoordX(packed) - cx;
    return dx >= s.lo && dx < s.hi;
  }
};

// Invokes `fn` with the membership functor for `kernel` centered at `center`.
template <typename Fn>
decltype(auto) WithMembership(const KernelShape& kernel, Point center,
                              Fn&& fn) {
  switch (kernel.spec().kind) {
    case ShapeKind::kCircle:
      return fn(CircleMembership{center.x, center.y,
                                 kernel.circle_threshold()});
    case ShapeKind::kSquare:
      return fn(SquareMembership{center.x, center.y, kernel.radius()});
    case ShapeKind::kRegularPolygon:
      break;
  }
  return fn(SpanMembership{center.x, center.y, kernel.radius(),
                           kernel.row_spans().data()});
}

// Membership bits for 64 consecutive omnigram entries.
template <typename Membership>
inline uint64_t SegmentBits(const uint16_t* segment,
                            const Membership& member) {
  uint64_t mask = 0;
  for (int k = 0; k < kSegmentSize; ++k) {
    mask |= static_cast<uint64_t>(member(segment[k])) << k;
  }
  return mask;
}

// Mask of the valid bits of `segment` in an omnigram of `size` entries.
inline uint64_t ValidBits(int segment, int size) {
  const int remaining = size - segment * kSegmentSize;
  return remaining >= kSegmentSize ? ~uint64_t{0}
                                   : (uint64_t{1} << remaining) - 1;
}

}  // namespace isomedian::internal

#endif  // ISOMEDIAN_SRC_MEMBERSHIP_H_
