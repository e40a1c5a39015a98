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

#ifndef ISOMEDIAN_IMAGE_H_
#define ISOMEDIAN_IMAGE_H_

#include <cassert>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace isomedian {

// Pixel types accepted by the filter engines.
template <typename T>
concept PixelType = std::same_as<T, uint8_t> || std::same_as<T, uint16_t> ||
                    std::same_as<T, float>;

// Dense interleaved image. Rows are stored top to bottom; within a row the
// channels of each pixel are adjacent.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, int channels = 1, T fill = T{})
      : width_(width),
        height_(height),
        channels_(channels),
        pixels_(static_cast<size_t>(width) * height * channels, fill) {
    assert(width >= 0 && height >= 0 && channels >= 1);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return pixels_.empty(); }

  // Number of elements between vertically adjacent pixels.
  ptrdiff_t stride() const {
    return static_cast<ptrdiff_t>(width_) * channels_;
  }

  T& at(int x, int y, int c = 0) {
    return pixels_[static_cast<size_t>(y) * stride() + x * channels_ + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return pixels_[static_cast<size_t>(y) * stride() + x * channels_ + c];
  }

  T* row(int y) { return pixels_.data() + static_cast<size_t>(y) * stride(); }
  const T* row(int y) const {
    return pixels_.data() + static_cast<size_t>(y) * stride();
  }

  std::span<T> pixels() { return pixels_; }
  std::span<const T> pixels() const { return pixels_; }
  T* data() { return pixels_.data(); }
  const T* data() const { return pixels_.data(); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<T> pixels_;
};

// Copies one channel of `image` into a single-plane image.
template <typename T>
Image<T> ExtractChannel(const Image<T>& image, int channel) {
  Image<T> plane(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      plane.at(x, y) = image.at(x, y, channel);
    }
  }
  return plane;
}

// Writes a single-plane image into one channel of `image`. Dimensions must
// match.
template <typename T>
void InsertChannel(const Image<T>& plane, int channel, Image<T>& image) {
  assert(plane.width() == image.width() && plane.height() == image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      image.at(x, y, channel) = plane.at(x, y);
    }
  }
}

// Bitwise image equality. Unlike operator==, distinguishes -0.0f from +0.0f
// and treats identical NaN payloads as equal.
template <typename T>
bool BitIdentical(const Image<T>& a, const Image<T>& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.channels() != b.channels()) {
    return false;
  }
  const auto pa = std::as_bytes(a.pixels());
  const auto pb = std::as_bytes(b.pixels());
  for (size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] != pb[i]) return false;
  }
  return true;
}

}  // namespace isomedian

#endif  // ISOMEDIAN_IMAGE_H_
