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


#include "isomedian_tools/image_io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace isomedian::tools {
namespace {

// Cursor over a header. PNM allows '#' comments between tokens.
class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  absl::StatusOr<std::string_view> Token() {
    SkipSpaceAndComments();
    const size_t start = pos_;
    while (pos_ < bytes_.size() && !IsSpace(bytes_[pos_])) ++pos_;
    if (pos_ == start) return absl::InvalidArgumentError("Truncated header.");
    return bytes_.substr(start, pos_ - start);
  }

  absl::StatusOr<int> Int(std::string_view what) {
    absl::StatusOr<std::string_view> token = Token();
    if (!token.ok()) return token.status();
    int value = 0;
    const auto [end, ec] =
        std::from_chars(token->data(), token->data() + token->size(), value);
    if (ec != std::errc() || end != token->data() + token->size() || value <= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("Bad ", std::string(what), " in header: '",
                       std::string(*token), "'"));
    }
    return value;
  }

  // The single whitespace byte that ends the header.
  absl::Status EndHeader() {
    if (pos_ >= bytes_.size() || !IsSpace(bytes_[pos_])) {
      return absl::InvalidArgumentError("Header not terminated by whitespace.");
    }
    ++pos_;
    return absl::OkStatus();
  }

  size_t position() const { return pos_; }

 private:
  static bool IsSpace(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (IsSpace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

absl::StatusOr<AnyImage> DecodePnm(std::string_view bytes, int channels) {
  HeaderReader header(bytes);
  (void)header.Token();  // Magic, already checked.
  absl::StatusOr<int> width = header.Int("width");
  if (!width.ok()) return width.status();
  absl::StatusOr<int> height = header.Int("height");
  if (!height.ok()) return height.status();
  absl::StatusOr<int> maxval = header.Int("maxval");
  if (!maxval.ok()) return maxval.status();
  if (absl::Status s = header.EndHeader(); !s.ok()) return s;
  if (*maxval != 255 && *maxval != 65535) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Unsupported maxval ", *maxval, "; only 255 and 65535 are accepted."));
  }
  const size_t count = static_cast<size_t>(*width) * *height * channels;
  const size_t bytes_per_sample = *maxval == 255 ? 1 : 2;
  const std::string_view data = bytes.substr(header.position());
  if (data.size() < count * bytes_per_sample) {
    return absl::InvalidArgumentError(
        absl::StrCat("Pixel data truncated: expected ", count * bytes_per_sample,
                     " bytes, found ", data.size()));
  }
  if (bytes_per_sample == 1) {
    Image<uint8_t> image(*width, *height, channels);
    std::memcpy(image.data(), data.data(), count);
    return image;
  }
  Image<uint16_t> image(*width, *height, channels);
  const auto* src = reinterpret_cast<const unsigned char*>(data.data());
  for (size_t i = 0; i < count; ++i) {
    image.data()[i] = static_cast<uint16_t>((src[2 * i] << 8) | src[2 * i + 1]);
  }
  return image;
}

absl::StatusOr<AnyImage> DecodePfm(std::string_view bytes, int channels) {
  HeaderReader header(bytes);
  (void)header.Token();
  absl::StatusOr<int> width = header.Int("width");
  if (!width.ok()) return width.status();
  absl::StatusOr<int> height = header.Int("height");
  if (!height.ok()) return height.status();
  absl::StatusOr<std::string_view> scale_token = header.Token();
  if (!scale_token.ok()) return scale_token.status();
  double scale = 0.0;
  const auto [end, ec] = std::from_chars(
      scale_token->data(), scale_token->data() + scale_token->size(), scale);
  if (ec != std::errc() || scale == 0.0 || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Bad PFM scale '", std::string(*scale_token), "'"));
  }
  if (absl::Status s = header.EndHeader(); !s.ok()) return s;
  const bool little_endian = scale < 0.0;

  const size_t row_floats = static_cast<size_t>(*width) * channels;
  const size_t count = row_floats * *height;
  const std::string_view data = bytes.substr(header.position());
  if (data.size() < count * 4) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Pixel data truncated: expected ", count * 4, " bytes, found ",
        data.size()));
  }
  Image<float> image(*width, *height, channels);
  const auto* src = reinterpret_cast<const unsigned char*>(data.data());
  for (int file_row = 0; file_row < *height; ++file_row) {
    // PFM stores rows bottom to top.
    float* dst = image.row(*height - 1 - file_row);
    for (size_t i = 0; i < row_floats; ++i) {
      const unsigned char* b = src + (file_row * row_floats + i) * 4;
      const uint32_t bits =
          little_endian
              ? (uint32_t{b[0]} | uint32_t{b[1]} << 8 | uint32_t{b[2]} << 16 |
                 uint32_t{b[3]} << 24)
              : (uint32_t{b[3]} | uint32_t{b[2]} << 8 | uint32_t{b[1]} << 16 |
                 uint32_t{b[0]} << 24);
      dst[i] = std::bit_cast<float>(bits);
    }
  }
  return image;
}

}  // namespace

absl::StatusOr<AnyImage> DecodeImage(std::string_view bytes) {
  if (bytes.size() < 2) return absl::InvalidArgumentError("File too short.");
  const std::string_view magic = bytes.substr(0, 2);
  if (magic == "P5") return DecodePnm(bytes, 1);
  if (magic == "P6") return DecodePnm(bytes, 3);
  if (magic == "Pf") return DecodePfm(bytes, 1);
  if (magic == "PF") return DecodePfm(bytes, 3);
  return absl::InvalidArgumentError(absl::StrCat(
      "Unrecognized file format (magic '", std::string(magic),
      "'); expected binary PGM (P5), PPM (P6) or PFM (Pf/PF)."));
}

absl::StatusOr<std::string> EncodeImage(const AnyImage& image) {
  const int channels = Channels(image);
  if (channels != 1 && channels != 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("Cannot store ", channels, "-channel images."));
  }
  return std::visit(
      [&](const auto& img) -> absl::StatusOr<std::string> {
        using T = typename std::decay_t<decltype(img)>::value_type;
        std::string out;
        const size_t count = img.pixels().size();
        if constexpr (std::is_same_v<T, float>) {
          out = absl::StrCat(channels == 1 ? "Pf" : "PF", "\n", img.width(),
                             " ", img.height(), "\n-1.0\n");
          const size_t row_floats = static_cast<size_t>(img.stride());
          out.reserve(out.size() + count * 4);
          for (int y = img.height() - 1; y >= 0; --y) {
            const float* row = img.row(y);
            for (size_t i = 0; i < row_floats; ++i) {
              const uint32_t bits = std::bit_cast<uint32_t>(row[i]);
              for (int k = 0; k < 4; ++k) {
                out.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
              }
            }
          }
        } else {
          constexpr int kMax = sizeof(T) == 1 ? 255 : 65535;
          out = absl::StrCat(channels == 1 ? "P5" : "P6", "\n", img.width(),
                             " ", img.height(), "\n", kMax, "\n");
          out.reserve(out.size() + count * sizeof(T));
          for (const T v : img.pixels()) {
            if constexpr (sizeof(T) == 2) out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xFF));
          }
        }
        return out;
      },
      image);
}

absl::StatusOr<AnyImage> ReadImage(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("Cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<AnyImage> image = DecodeImage(buffer.str());
  if (!image.ok()) {
    return absl::Status(image.status().code(),
                        absl::StrCat(path, ": ", image.status().message()));
  }
  return image;
}

absl::Status WriteImage(const std::string& path, const AnyImage& image) {
  absl::StatusOr<std::string> bytes = EncodeImage(image);
  if (!bytes.ok()) return bytes.status();
  std::ofstream out(path, std::ios::binary);
  out.write(bytes->data(), static_cast<std::streamsize>(bytes->size()));
  if (!out) return absl::UnavailableError(absl::StrCat("Cannot write ", path));
  return absl::OkStatus();
}

int Channels(const AnyImage& image) {
  return std::visit([](const auto& img) { return img.channels(); }, image);
}
int Width(const AnyImage& image) {
  return std::visit([](const auto& img) { return img.width(); }, image);
}
int Height(const AnyImage& image) {
  return std::visit([](const auto& img) { return img.height(); }, image);
}

std::string_view TypeName(const AnyImage& image) {
  switch (image.index()) {
    case 0:
      return "u8";
    case 1:
      return "u16";
    default:
      return "f32";
  }
}

}  // namespace isomedian::tools
