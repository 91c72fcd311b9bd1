// Copyright 2026 The Panolux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "panolux/image.hpp"

namespace panolux {

struct RgbeHeader {
  std::string format_tag;
  /// Product of all EXPOSURE= lines; recorded on read, never written.
  std::optional<double> exposure;
  std::size_t height = 0;
  std::size_t width = 0;
};

struct RgbeFile {
  RgbeHeader header;
  HdrImage image;
};

enum class ScanlineEncoding {
  automatic,  // new-style RLE for 8 <= width <= 32767, flat otherwise
  flat,
};

/// Shared-exponent encoding of one pixel. The exponent is taken from frexp of
/// the largest component and mantissas are rounded to nearest.
std::array<std::uint8_t, 4> encode_rgbe_pixel(double r, double g, double b);

/// mantissa / 256 * 2^(exponent - 128); an exponent byte of 0 decodes to zero.
std::array<double, 3> decode_rgbe_pixel(std::array<std::uint8_t, 4> rgbe);

/// Parses the header and returns it with the offset of the first scanline byte.
RgbeHeader parse_rgbe_header(std::span<const std::uint8_t> bytes, std::size_t& data_offset);

RgbeFile read_rgbe_file(std::span<const std::uint8_t> bytes);
HdrImage read_rgbe(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> write_rgbe(const HdrImage& image,
                                     ScanlineEncoding encoding = ScanlineEncoding::automatic);

}  // namespace panolux
