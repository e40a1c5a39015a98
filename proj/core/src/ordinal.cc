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

#include "isomedian/ordinal.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <memory>

#include "absl/strings/str_cat.h"
#include "membership.h"

namespace isomedian {
namespace internal {

struct OrdinalBuilder {
  // Sizes the tile's arrays and returns the participating pixel count.
  template <PixelType T>
  static int Allocate(const TileView<T>& tile, OrdinalTile<T>& out) {
    OrdinalIndex& index = out.index_;
    index.width_ = tile.width;
    index.height_ = tile.height;
    int size = tile.width * tile.height;
    if (!tile.valid_mask.empty()) {
      size = static_cast<int>(
          std::count_if(tile.valid_mask.begin(), tile.valid_mask.end(),
                        [](uint8_t m) { return m != 0; }));
    }
    index.size_ = size;
    index.ordinals_.assign(static_cast<size_t>(tile.width) * tile.height,
                           OrdinalIndex::kExcluded);
    const int padded =
        (size + kSegmentSize - 1) / kSegmentSize * kSegmentSize;
    index.omnigram_.assign(std::max(padded, kSegmentSize), 0);
    out.reverse_map_.resize(size);
    return size;
  }

  // Records that the pixel at (x, y) has ordinal v.
  template <PixelType T>
  static void Assign(OrdinalTile<T>& out, int v, int x, int y, T value) {
    out.index_.omnigram_[v] = PackCoord(x, y);
    out.index_.ordinals_[y * out.index_.width_ + x] = static_cast<uint16_t>(v);
    out.reverse_map_[v] = value;
  }
};

}  // namespace internal

namespace {

using internal::OrdinalBuilder;

template <PixelType T>
absl::Status CheckTile(const TileView<T>& tile) {
  if (tile.width < 1 || tile.height < 1 || tile.width > kMaxTileSide ||
      tile.height > kMaxTileSide) {
    return absl::InvalidArgumentError(
        absl::StrCat("Tile dimensions must be in [1, ", kMaxTileSide,
                     "], got ", tile.width, "x", tile.height));
  }
  if (!tile.valid_mask.empty() &&
      tile.valid_mask.size() != static_cast<size_t>(tile.width) * tile.height) {
    return absl::InvalidArgumentError("Valid mask does not match tile size.");
  }
  return absl::OkStatus();
}

// Single-pass counting sort for 8- and 16-bit tiles: histogram, exclusive
// prefix sum, then a row-major rescan handing out v = H'[c]++.
template <PixelType T>
OrdinalTile<T> CountingSortTransform(const TileView<T>& tile) {
  OrdinalTile<T> out;
  OrdinalBuilder::Allocate(tile, out);
  ValueHistogram hist = BuildValueHistogram(tile);
  std::vector<uint32_t>& next = hist.h_prime;
  for (int y = 0; y < tile.height; ++y) {
    for (int x = 0; x < tile.width; ++x) {
      if (!tile.participates(x, y)) continue;
      const T value = tile.at(x, y);
      OrdinalBuilder::Assign(out, static_cast<int>(next[value]++), x, y,
                             value);
    }
  }
  return out;
}

// Sorts 32-bit tuples (low key half << 16 | packed coord) of one top-16-bit
// bucket. The input is in row-major order, so both branches order equal keys
// by position.
void SortBucket(uint32_t* tuples, int count, uint32_t* scratch) {
  constexpr int kComparisonSortThreshold = 64;
  if (count <= 1) return;
  if (count <= kComparisonSortThreshold) {
    std::sort(tuples, tuples + count);
    return;
  }
  // Two stable LSD passes over bits 16..23 and 24..31.
  for (int shift = 16; shift <= 24; shift += 8) {
    uint32_t offsets[257] = {0};
    for (int i = 0; i < count; ++i) ++offsets[((tuples[i] >> shift) & 0xFF) + 1];
    for (int b = 0; b < 256; ++b) offsets[b + 1] += offsets[b];
    for (int i = 0; i < count; ++i) {
      scratch[offsets[(tuples[i] >> shift) & 0xFF]++] = tuples[i];
    }
    std::memcpy(tuples, scratch, count * sizeof(uint32_t));
  }
}

absl::StatusOr<OrdinalTile<float>> RadixSortTransform(
    const TileView<float>& tile) {
  for (int y = 0; y < tile.height; ++y) {
    for (int x = 0; x < tile.width; ++x) {
      if (tile.participates(x, y) && std::isnan(tile.at(x, y))) {
        return absl::InvalidArgumentError(
            absl::StrCat("NaN pixel at (", x, ", ", y,
                         "); NaN inputs are not supported."));
      }
    }
  }

  OrdinalTile<float> out;
  const int size = OrdinalBuilder::Allocate(tile, out);

  // Pass 1: stable bucket sort on the top 16 key bits.
  std::vector<uint32_t> offsets(65536 + 1, 0);
  for (int y = 0; y < tile.height; ++y) {
    for (int x = 0; x < tile.width; ++x) {
      if (!tile.participates(x, y)) continue;
      ++offsets[(FloatOrderKey(tile.at(x, y)) >> 16) + 1];
    }
  }
  for (int b = 0; b < 65536; ++b) offsets[b + 1] += offsets[b];
  std::vector<uint32_t> bucket_begin(offsets.begin(), offsets.end());

  auto tuples = std::make_unique<uint32_t[]>(size);
  for (int y = 0; y < tile.height; ++y) {
    for (int x = 0; x < tile.width; ++x) {
      if (!tile.participates(x, y)) continue;
      const uint32_t key = FloatOrderKey(tile.at(x, y));
      tuples[offsets[key >> 16]++] = (key << 16) | PackCoord(x, y);
    }
  }

  // Passes 2 and 3 within each occupied bucket.
  auto scratch = std::make_unique<uint32_t[]>(size);
  for (int b = 0; b < 65536; ++b) {
    const int begin = static_cast<int>(bucket_begin[b]);
    const int count = static_cast<int>(bucket_begin[b + 1]) - begin;
    if (count > 1) SortBucket(&tuples[begin], count, scratch.get());
  }

  for (int v = 0; v < size; ++v) {
    const uint16_t packed = tuples[v] & 0xFFFF;
    const int x = CoordX(packed);
    const int y = CoordY(packed);
    OrdinalBuilder::Assign(out, v, x, y, tile.at(x, y));
  }
  return out;
}

}  // namespace

template <PixelType T>
  requires std::is_integral_v<T>
ValueHistogram BuildValueHistogram(const TileView<T>& tile) {
  constexpr size_t kBuckets = size_t{1} << (8 * sizeof(T));
  ValueHistogram hist;
  hist.h.assign(kBuckets, 0);
  for (int y = 0; y < tile.height; ++y) {
    const T* row = tile.data + y * tile.stride;
    if (tile.valid_mask.empty()) {
      for (int x = 0; x < tile.width; ++x) ++hist.h[row[x]];
    } else {
      for (int x = 0; x < tile.width; ++x) {
        if (tile.participates(x, y)) ++hist.h[row[x]];
      }
    }
  }
  hist.h_prime.resize(kBuckets);
  uint32_t sum = 0;
  for (size_t k = 0; k < kBuckets; ++k) {
    hist.h_prime[k] = sum;
    sum += hist.h[k];
  }
  return hist;
}

template ValueHistogram BuildValueHistogram(const TileView<uint8_t>&);
template ValueHistogram BuildValueHistogram(const TileView<uint16_t>&);

template <PixelType T>
absl::StatusOr<OrdinalTile<T>> OrdinalTransform(const TileView<T>& tile) {
  if (absl::Status status = CheckTile(tile); !status.ok()) return status;
  if constexpr (std::is_same_v<T, float>) {
    return RadixSortTransform(tile);
  } else {
    return CountingSortTransform(tile);
  }
}

template absl::StatusOr<OrdinalTile<uint8_t>> OrdinalTransform(
    const TileView<uint8_t>&);
template absl::StatusOr<OrdinalTile<uint16_t>> OrdinalTransform(
    const TileView<uint16_t>&);
template absl::StatusOr<OrdinalTile<float>> OrdinalTransform(
    const TileView<float>&);

uint32_t FloatOrderKey(float value) {
  return FloatOrderKey(std::bit_cast<uint32_t>(value));
}

int OmnigramQuery(const OrdinalIndex& index, int v, Point center,
                  const KernelShape& kernel) {
  const uint16_t packed = index.omnigram()[v];
  return kernel.Contains(CoordX(packed) - center.x, CoordY(packed) - center.y)
             ? 1
             : 0;
}

SegmentMask ComputeSegmentMask(const OrdinalIndex& index, int segment,
                               Point center, const KernelShape& kernel) {
  const uint16_t* entries = index.omnigram_data() + segment * kSegmentSize;
  const uint64_t mask = internal::WithMembership(
      kernel, center, [&](const auto& member) {
        return internal::SegmentBits(entries, member);
      });
  SegmentMask result;
  result.mask = mask & internal::ValidBits(segment, index.size());
  result.pop = std::popcount(result.mask);
  return result;
}

}  // namespace isomedian
