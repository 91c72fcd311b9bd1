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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "panolux/image.hpp"

namespace panolux {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Binary PPM (P6) with maxval 255.
Raster8 decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const Raster8& image);

/// Non-interlaced 8-bit truecolor PNG; every other bit depth or color type is rejected.
Raster8 decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Raster8& image);

/// Sniffs PPM or PNG from the leading bytes.
Raster8 decode_raster(std::span<const std::uint8_t> bytes);

LdrImage read_ldr(std::span<const std::uint8_t> bytes, double exposure_ms);

enum class LdrFormat { ppm, png };
std::vector<std::uint8_t> write_ldr(const LdrImage& image, LdrFormat format = LdrFormat::ppm);

}  // namespace panolux
