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
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace isomedian {
namespace {

std::set<Offset> Shifted(std::span<const Offset> offsets, int sx, int sy) {
  std::set<Offset> out;
  for (const Offset& o : offsets) out.insert({o.dx + sx, o.dy + sy});
  return out;
}

// Applies one slide's deltas to the offset set and compares with the set
// translated by (sx, sy). Delta offsets are relative to the pre-slide center.
void ExpectSlideRoundTrip(const KernelShape& k, const SlideDeltas& d, int sx,
                          int sy) {
  std::set<Offset> slid(k.offsets().begin(), k.offsets().end());
  for (const Offset& o : d.exit) ASSERT_EQ(slid.erase(o), 1u);
  for (const Offset& o : d.enter) ASSERT_TRUE(slid.insert(o).second);
  EXPECT_EQ(slid, Shifted(k.offsets(), sx, sy));
}

TEST(ContainsTest, CircleRadiusTwo) {
  const ShapeSpec c = ShapeSpec::Circle(2);
  EXPECT_FALSE(Contains(c, 2, 2));
  EXPECT_TRUE(Contains(c, 0, 0));
  EXPECT_TRUE(Contains(c, 2, 1));
  EXPECT_TRUE(Contains(c, -1, -2));
  EXPECT_FALSE(Contains(c, 3, 0));
}

TEST(ContainsTest, SquareAndPolygon) {
  EXPECT_TRUE(Contains(ShapeSpec::Square(3), -3, 3));
  EXPECT_FALSE(Contains(ShapeSpec::Square(3), -4, 0));
  // Axis-aligned square as a 4-gon rotated 45 degrees has half-width
  // (r + 0.5) / sqrt(2).
  const ShapeSpec diamond = ShapeSpec::Polygon(4, 4, 0.0);
  EXPECT_TRUE(Contains(diamond, 4, 0));
  EXPECT_FALSE(Contains(diamond, 3, 2));
  const ShapeSpec box = ShapeSpec::Polygon(4, 4, 45.0);
  EXPECT_TRUE(Contains(box, 2, 2));
  EXPECT_FALSE(Contains(box, 4, 0));
}

TEST(MakeKernelTest, Areas) {
  EXPECT_EQ(MakeKernel(ShapeSpec::Circle(2))->area(), 21);
  EXPECT_EQ(MakeKernel(ShapeSpec::Circle(1))->area(), 9);
  EXPECT_EQ(MakeKernel(ShapeSpec::Square(2))->area(), 25);
  const KernelShape point = *MakeKernel(ShapeSpec::Circle(0));
  ASSERT_EQ(point.area(), 1);
  EXPECT_EQ(point.offsets()[0], (Offset{0, 0}));
}

TEST(MakeKernelTest, RejectsInvalidSpecs) {
  EXPECT_FALSE(MakeKernel(ShapeSpec::Circle(-1)).ok());
  EXPECT_FALSE(MakeKernel(ShapeSpec::Polygon(5, 65)).ok());
  EXPECT_FALSE(MakeKernel(ShapeSpec::Polygon(5, 2)).ok());
  EXPECT_TRUE(MakeKernel(ShapeSpec::Polygon(5, 64)).ok());
}

TEST(MakeKernelTest, TablesAgreeWithPredicate) {
  for (const ShapeSpec spec :
       {ShapeSpec::Circle(7), ShapeSpec::Square(5), ShapeSpec::Polygon(9, 5, 12.0),
        ShapeSpec::Polygon(6, 12), ShapeSpec::Polygon(3, 3, 90.0)}) {
    const KernelShape k = *MakeKernel(spec);
    int count = 0;
    int span_sum = 0;
    for (int dy = -spec.radius; dy <= spec.radius; ++dy) {
      span_sum += std::max(0, k.row_span(dy).width());
      for (int dx = -spec.radius; dx <= spec.radius; ++dx) {
        EXPECT_EQ(k.Contains(dx, dy), Contains(spec, dx, dy));
        count += Contains(spec, dx, dy);
      }
    }
    EXPECT_EQ(k.area(), count);
    EXPECT_EQ(k.area(), span_sum);
    EXPECT_EQ(static_cast<int>(k.offsets().size()), count);
    EXPECT_TRUE(std::is_sorted(k.offsets().begin(), k.offsets().end(),
                               [](Offset a, Offset b) {
                                 return a.dy != b.dy ? a.dy < b.dy : a.dx < b.dx;
                               }));
    int columns = 0;
    for (int dx = -spec.radius; dx <= spec.radius; ++dx) {
      columns += !k.column_extent(dx).empty();
    }
    EXPECT_EQ(static_cast<int>(k.v_deltas().enter.size()), columns);
    EXPECT_EQ(static_cast<int>(k.v_deltas().exit.size()), columns);
  }
}

TEST(MakeKernelTest, PointSymmetry) {
  for (int r = 0; r <= 20; ++r) {
    for (const ShapeSpec spec : {ShapeSpec::Circle(r), ShapeSpec::Square(r)}) {
      const KernelShape k = *MakeKernel(spec);
      for (const Offset& o : k.offsets()) EXPECT_TRUE(k.Contains(-o.dx, -o.dy));
    }
  }
}

TEST(MakeKernelTest, SlideRoundTripAllRadii) {
  for (int r = 0; r <= 124; ++r) {
    SCOPED_TRACE(r);
    const KernelShape circle = *MakeKernel(ShapeSpec::Circle(r));
    ExpectSlideRoundTrip(circle, circle.h_deltas(), 1, 0);
    ExpectSlideRoundTrip(circle, circle.v_deltas(), 0, 1);
    if (r % 9 == 0) {
      const KernelShape square = *MakeKernel(ShapeSpec::Square(r));
      ExpectSlideRoundTrip(square, square.h_deltas(), 1, 0);
      ExpectSlideRoundTrip(square, square.v_deltas(), 0, 1);
      const KernelShape hex = *MakeKernel(ShapeSpec::Polygon(r, 6, 7.0));
      ExpectSlideRoundTrip(hex, hex.h_deltas(), 1, 0);
      ExpectSlideRoundTrip(hex, hex.v_deltas(), 0, 1);
    }
  }
}

TEST(MakeKernelTest, CircleDihedralSymmetry) {
  for (int r = 0; r <= 124; ++r) {
    const KernelShape k = *MakeKernel(ShapeSpec::Circle(r));
    for (const Offset& o : k.offsets()) {
      ASSERT_TRUE(k.Contains(o.dy, o.dx));
      ASSERT_TRUE(k.Contains(-o.dx, o.dy));
      ASSERT_TRUE(k.Contains(o.dx, -o.dy));
    }
  }
}

TEST(MakeKernelTest, CircleAreaNonDecreasing) {
  int previous = 0;
  for (int r = 0; r <= 124; ++r) {
    const int area = MakeKernel(ShapeSpec::Circle(r))->area();
    EXPECT_GE(area, previous);
    previous = area;
  }
}

TEST(TargetRankTest, Examples) {
  EXPECT_EQ(*TargetRank(49, 0.5), 24);
  EXPECT_EQ(*TargetRank(21, 0.5), 10);
  EXPECT_EQ(*TargetRank(21, 0.0), 0);
  EXPECT_EQ(*TargetRank(21, 1.0), 20);
  EXPECT_EQ(*TargetRank(1, 0.7), 0);
  EXPECT_FALSE(TargetRank(21, 1.5).ok());
  EXPECT_FALSE(TargetRank(21, -0.1).ok());
  EXPECT_FALSE(TargetRank(0, 0.5).ok());
}

TEST(TargetRankTest, MedianIsMiddleOfSortedList) {
  std::vector<int> values(21);
  for (int i = 0; i < 21; ++i) values[i] = (i * 13) % 21;
  std::sort(values.begin(), values.end());
  EXPECT_EQ(values[*TargetRank(21, 0.5)], 10);
}

}  // namespace
}  // namespace isomedian
