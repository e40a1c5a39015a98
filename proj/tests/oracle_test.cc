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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace isomedian {
namespace {

TEST(ReferenceFilterTest, ThreeByThreeMedian) {
  Image<uint8_t> image(3, 3);
  for (int i = 0; i < 9; ++i) image.pixels()[i] = static_cast<uint8_t>(i + 1);
  FilterParams p;
  p.shape = ShapeSpec::Circle(1);
  p.boundary = BoundaryMode::kValid;
  absl::StatusOr<Image<uint8_t>> out = ReferenceFilter(image, p);
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->width(), 1);
  EXPECT_EQ(out->at(0, 0), 5);
}

TEST(ReferenceFilterTest, ConstantImage) {
  const Image<uint16_t> image(20, 20, 1, 700);
  FilterParams p;
  p.shape = ShapeSpec::Circle(4);
  EXPECT_EQ(*ReferenceFilter(image, p), image);
}

// Independent check of the selection: a counting sort over 8-bit values.
TEST(ReferenceFilterTest, AgreesWithCountingSelection) {
  std::mt19937 rng(51);
  const Image<uint8_t> image = testing::RandomImage<uint8_t>(40, 30, rng);
  for (const double percentile : {0.0, 0.37, 1.0}) {
    FilterParams p;
    p.shape = ShapeSpec::Polygon(5, 7, 20.0);
    p.percentile = percentile;
    const Image<uint8_t> out = *ReferenceFilter(image, p);
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 40; ++x) {
        std::vector<int> counts(256, 0);
        int area = 0;
        for (int dy = -5; dy <= 5; ++dy) {
          for (int dx = -5; dx <= 5; ++dx) {
            if (!Contains(p.shape, dx, dy)) continue;
            ++area;
            ++counts[image.at(std::clamp(x + dx, 0, 39), std::clamp(y + dy, 0, 29))];
          }
        }
        int rank = *TargetRank(area, percentile);
        int value = 0;
        while (rank >= counts[value]) rank -= counts[value++];
        ASSERT_EQ(out.at(x, y), value);
      }
    }
  }
}

TEST(ReferenceFilterTest, SignedZerosOrderedNegativeFirst) {
  Image<float> image(3, 1);
  image.at(0, 0) = 0.0f;
  image.at(1, 0) = -0.0f;
  image.at(2, 0) = 0.0f;
  FilterParams p;
  p.shape = ShapeSpec::Square(1);
  p.percentile = 0.0;
  const Image<float> out = *ReferenceFilter(image, p);
  EXPECT_TRUE(std::signbit(out.at(1, 0)));
}

TEST(ReferenceFilterMultiTest, MatchesSingleRuns) {
  std::mt19937 rng(52);
  const Image<float> image = testing::RandomImage<float>(33, 21, rng);
  FilterParams p;
  p.shape = ShapeSpec::Circle(3);
  const std::vector<double> percentiles = {0.9, 0.1, 0.5, 0.5};
  absl::StatusOr<std::vector<Image<float>>> multi =
      ReferenceFilterMulti(image, p, percentiles);
  ASSERT_TRUE(multi.ok());
  for (size_t i = 0; i < percentiles.size(); ++i) {
    p.percentile = percentiles[i];
    EXPECT_TRUE(BitIdentical((*multi)[i], *ReferenceFilter(image, p)));
  }
}

}  // namespace
}  // namespace isomedian
