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

// Brute-force reference filter. Gathers every kernel member of every window
// and selects the target rank directly. Slow, simple, and the ground truth
// for the fast engine.

#ifndef ISOMEDIAN_ORACLE_H_
#define ISOMEDIAN_ORACLE_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "isomedian/image.h"
#include "isomedian/tiling.h"

namespace isomedian {

// Strict weak order used for selection. For floats, -0.0 sorts before +0.0
// so the selected bit pattern is well defined.
template <PixelType T>
bool OracleLess(T a, T b);

// Filters `image` like FilterImage. Does not enforce the radius cap or use
// tiling; params.tile_size and params.forwarding are ignored.
template <PixelType T>
absl::StatusOr<Image<T>> ReferenceFilter(const Image<T>& image,
                                         const FilterParams& params);

// One output per percentile (fractions in [0, 1]), gathering each window
// once. params.percentile and params.percentile_map are ignored.
template <PixelType T>
absl::StatusOr<std::vector<Image<T>>> ReferenceFilterMulti(
    const Image<T>& image, const FilterParams& params,
    std::span<const double> percentiles);

}  // namespace isomedian

#endif  // ISOMEDIAN_ORACLE_H_
