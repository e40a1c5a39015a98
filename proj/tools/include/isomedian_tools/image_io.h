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


// Binary PGM/PPM (8 or 16 bit) and PFM readers and writers.

#ifndef ISOMEDIAN_TOOLS_IMAGE_IO_H_
#define ISOMEDIAN_TOOLS_IMAGE_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "isomedian/image.h"

namespace isomedian::tools {

// 8-bit files load as uint8, 16-bit as uint16, PFM as float. Only one or
// three channels are representable on disk.
using AnyImage = std::variant<Image<uint8_t>, Image<uint16_t>, Image<float>>;

absl::StatusOr<AnyImage> DecodeImage(std::string_view bytes);
absl::StatusOr<std::string> EncodeImage(const AnyImage& image);

absl::StatusOr<AnyImage> ReadImage(const std::string& path);
absl::Status WriteImage(const std::string& path, const AnyImage& image);

int Channels(const AnyImage& image);
int Width(const AnyImage& image);
int Height(const AnyImage& image);
// "u8", "u16" or "f32".
std::string_view TypeName(const AnyImage& image);

}  // namespace isomedian::tools

#endif  // ISOMEDIAN_TOOLS_IMAGE_IO_H_
