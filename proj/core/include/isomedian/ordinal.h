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

// The ordinal transform replaces every pixel of a tile with its unique rank in
// the tile. Equal values receive consecutive ranks in row-major order, so the
// transform is stable and deterministic. Alongside the ordinal image it
// produces the omnigram, which maps each rank back to the packed (x, y)
// location of its pixel, and the reverse map of sorted cardinal values. Since
// the ordinal image is a permutation, the binary histogram element for rank v
// of any window is just a membership test of omnigram[v] against the window.

#ifndef ISOMEDIAN_ORDINAL_H_
#define ISOMEDIAN_ORDINAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "isomedian/image.h"
#include "isomedian/kernel_geometry.h"

namespace isomedian {

// Input tiles are capped at 256x256 so omnigram coordinates fit 8 + 8 bits
// and ordinals fit 16 bits.
inline constexpr int kMaxTileSide = 256;
// Omnigram entries are reduced to bitmasks 64 at a time; pivots are multiples
// of this.
inline constexpr int kSegmentSize = 64;

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Omnigram packing: x in the low byte, y in the high byte. For a fixed tile
// this is monotone in row-major order.
constexpr uint16_t PackCoord(int x, int y) {
  return static_cast<uint16_t>((y << 8) | x);
}
constexpr int CoordX(uint16_t packed) { return packed & 0xFF; }
constexpr int CoordY(uint16_t packed) { return packed >> 8; }

// Non-owning row-major view of one cardinal tile.
template <PixelType T>
struct TileView {
  const T* data = nullptr;
  int width = 0;
  int height = 0;
  ptrdiff_t stride = 0;  // In elements.
  // Optional, `width` x `height` row-major; zero marks a pixel that takes no
  // part in the transform. Empty means every pixel participates.
  std::span<const uint8_t> valid_mask;

  T at(int x, int y) const { return data[y * stride + x]; }
  bool participates(int x, int y) const {
    return valid_mask.empty() || valid_mask[y * width + x] != 0;
  }

  static TileView Of(const Image<T>& image) {
    return {image.data(), image.width(), image.height(), image.stride(), {}};
  }
};

namespace internal {
struct OrdinalBuilder;
}  // namespace internal

// Type-independent half of an ordinal tile: ordinal image plus omnigram.
class OrdinalIndex {
 public:
  // Ordinal stored at non-participating positions. Never collides with a real
  // ordinal because masked tiles have fewer than 65536 participants.
  static constexpr uint16_t kExcluded = 0xFFFF;

  int width() const { return width_; }
  int height() const { return height_; }
  // Participating pixel count N_t.
  int size() const { return size_; }
  int num_segments() const {
    return (size_ + kSegmentSize - 1) / kSegmentSize;
  }

  uint16_t ordinal(int x, int y) const { return ordinals_[y * width_ + x]; }
  const uint16_t* ordinal_row(int y) const {
    return ordinals_.data() + static_cast<size_t>(y) * width_;
  }
  std::span<const uint16_t> ordinals() const { return ordinals_; }
  bool participates(int x, int y) const {
    return size_ == width_ * height_ || ordinal(x, y) != kExcluded;
  }

  // Exactly size() entries.
  std::span<const uint16_t> omnigram() const {
    return std::span<const uint16_t>(omnigram_).first(size_);
  }
  // Padded to a whole number of segments; padding entries are zero and must
  // be masked off by the reader.
  const uint16_t* omnigram_data() const { return omnigram_.data(); }

 private:
  friend struct internal::OrdinalBuilder;

  int width_ = 0;
  int height_ = 0;
  int size_ = 0;
  std::vector<uint16_t> ordinals_;
  std::vector<uint16_t> omnigram_;
};

// Product of the ordinal transform. Immutable and safe to share.
template <PixelType T>
class OrdinalTile {
 public:
  const OrdinalIndex& index() const { return index_; }
  int width() const { return index_.width(); }
  int height() const { return index_.height(); }
  int size() const { return index_.size(); }
  uint16_t ordinal(int x, int y) const { return index_.ordinal(x, y); }
  std::span<const uint16_t> omnigram() const { return index_.omnigram(); }
  // Sorted cardinal values; reverse_map()[ordinal(x, y)] is the original
  // value at (x, y).
  std::span<const T> reverse_map() const { return reverse_map_; }

 private:
  friend struct internal::OrdinalBuilder;

  OrdinalIndex index_;
  std::vector<T> reverse_map_;
};

// Transforms one tile. 8-bit tiles use a 256-bucket counting sort, 16-bit
// tiles a 65536-bucket one, and float tiles a stable radix sort of
// FloatOrderKey. Rejects tiles larger than 256x256 and tiles holding NaN.
template <PixelType T>
absl::StatusOr<OrdinalTile<T>> OrdinalTransform(const TileView<T>& tile);

// Counts per cardinal value and their exclusive prefix sums, for integer
// tiles. h_prime.back() + h.back() == participating pixel count.
struct ValueHistogram {
  std::vector<uint32_t> h;
  std::vector<uint32_t> h_prime;
};

template <PixelType T>
  requires std::is_integral_v<T>
ValueHistogram BuildValueHistogram(const TileView<T>& tile);

// Maps a float bit pattern to an unsigned key whose integer order matches
// the IEEE total order on non-NaN values (-0.0 sorts before +0.0). Positive
// values get their sign bit set; negative values have all bits inverted.
constexpr uint32_t FloatOrderKey(uint32_t bits) {
  const uint32_t negative_mask =
      static_cast<uint32_t>(static_cast<int32_t>(bits) >> 31);
  return bits ^ (negative_mask | 0x80000000u);
}
uint32_t FloatOrderKey(float value);

// Binary histogram element of rank `v` for the window of `kernel` centered
// at `center`: 1 iff omnigram[v] lies inside the window.
int OmnigramQuery(const OrdinalIndex& index, int v, Point center,
                  const KernelShape& kernel);

struct SegmentMask {
  uint64_t mask = 0;  // Bit k covers rank 64 * segment + k.
  int pop = 0;
};

// Window membership of the 64 ranks of one omnigram segment. Ranks past the
// end of the omnigram contribute zero bits.
SegmentMask ComputeSegmentMask(const OrdinalIndex& index, int segment,
                               Point center, const KernelShape& kernel);

}  // namespace isomedian

#endif  // ISOMEDIAN_ORDINAL_H_
