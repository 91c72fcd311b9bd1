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

#include "panolux/ldr_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace panolux {
namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;
constexpr std::size_t kMaxDeflateRatio = 1032;
constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t load_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void store_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  std::span<const std::uint8_t> payload) {
  store_be32(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + payload.size()));
  store_be32(out, static_cast<std::uint32_t>(crc));
}

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

void check_raster(const Raster8& image) {
  if (image.width == 0 || image.height == 0 ||
      image.rgb.size() != image.width * image.height * 3) {
    throw Error(Errc::invalid_dimensions, "raster size does not match its dimensions");
  }
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

Raster8 decode_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(Errc::bad_magic, "not a binary PPM", 0);
  }
  pos = 2;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&](const char* what) {
    skip_space();
    const std::size_t start = pos;
    std::size_t v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > kMaxPixels) throw Error(Errc::malformed, std::string(what) + " too large", start);
      ++pos;
    }
    if (pos == start) throw Error(Errc::malformed, std::string("expected ") + what, start);
    return v;
  };
  const std::size_t width = number("width");
  const std::size_t height = number("height");
  const std::size_t maxval = number("maxval");
  if (maxval != 255) {
    throw Error(Errc::unsupported_depth, "only maxval 255 is supported", pos);
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(Errc::malformed, "missing separator after maxval", pos);
  }
  ++pos;
  if (width == 0 || height == 0 || width * height > kMaxPixels) {
    throw Error(Errc::bad_resolution, "bad PPM size", pos);
  }
  const std::size_t n = width * height * 3;
  if (bytes.size() - pos < n) throw Error(Errc::truncated, "PPM pixel data", bytes.size());
  return {width, height, std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + n))};
}

std::vector<std::uint8_t> encode_ppm(const Raster8& image) {
  check_raster(image);
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

Raster8 decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    throw Error(Errc::bad_magic, "not a PNG", 0);
  }
  std::size_t pos = 8;
  std::size_t width = 0;
  std::size_t height = 0;
  bool have_header = false;
  bool have_end = false;
  std::vector<std::uint8_t> idat;

  while (!have_end) {
    if (bytes.size() - pos < 12) throw Error(Errc::truncated, "PNG chunk", pos);
    const std::size_t chunk_at = pos;
    const std::uint32_t len = load_be32(bytes.data() + pos);
    const std::uint8_t* type = bytes.data() + pos + 4;
    if (len > bytes.size() - pos - 12) throw Error(Errc::truncated, "PNG chunk payload", pos);
    const std::uint8_t* payload = type + 4;
    const std::uint32_t stored_crc = load_be32(payload + len);
    if (crc32(0L, type, len + 4) != stored_crc) throw Error(Errc::malformed, "PNG CRC mismatch", pos);
    pos += 12 + len;

    const std::string_view tag(reinterpret_cast<const char*>(type), 4);
    if (tag == "IHDR") {
      if (len != 13 || have_header) throw Error(Errc::malformed, "bad IHDR", chunk_at);
      width = load_be32(payload);
      height = load_be32(payload + 4);
      const int depth = payload[8];
      const int color = payload[9];
      if (depth != 8) {
        throw Error(Errc::unsupported_depth,
                    "PNG bit depth " + std::to_string(depth) + " is not supported", chunk_at);
      }
      if (color != 2) {
        throw Error(Errc::unsupported_format, "only truecolor RGB PNG is supported", chunk_at);
      }
      if (payload[10] != 0 || payload[11] != 0) throw Error(Errc::malformed, "bad IHDR", chunk_at);
      if (payload[12] != 0) {
        throw Error(Errc::unsupported_format, "interlaced PNG is not supported", chunk_at);
      }
      if (width == 0 || height == 0 || width * height > kMaxPixels) {
        throw Error(Errc::bad_resolution, "bad PNG size", chunk_at);
      }
      have_header = true;
    } else if (tag == "IDAT") {
      if (!have_header) throw Error(Errc::malformed, "IDAT before IHDR", chunk_at);
      idat.insert(idat.end(), payload, payload + len);
    } else if (tag == "IEND") {
      have_end = true;
    } else if (!(type[0] & 0x20)) {
      throw Error(Errc::unsupported_format, "unknown critical PNG chunk", chunk_at);
    }
  }
  if (!have_header) throw Error(Errc::malformed, "PNG has no IHDR", pos);

  const std::size_t stride = width * 3;
  // deflate expands at most ~1032:1, so refuse before allocating for a size
  // the compressed payload cannot produce
  if ((stride + 1) * height / kMaxDeflateRatio > idat.size()) {
    throw Error(Errc::truncated, "PNG image data too short for the declared size", pos);
  }
  std::vector<std::uint8_t> raw((stride + 1) * height);
  uLongf raw_size = static_cast<uLongf>(raw.size());
  const int zrc = uncompress(raw.data(), &raw_size, idat.data(), static_cast<uLong>(idat.size()));
  if (zrc != Z_OK || raw_size != raw.size()) {
    throw Error(Errc::malformed, "PNG image data does not inflate to the declared size");
  }

  Raster8 image{width, height, std::vector<std::uint8_t>(stride * height)};
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* src = raw.data() + y * (stride + 1) + 1;
    std::uint8_t* dst = image.rgb.data() + y * stride;
    const std::uint8_t* prev = y > 0 ? dst - stride : nullptr;
    for (std::size_t x = 0; x < stride; ++x) {
      const int a = x >= 3 ? dst[x - 3] : 0;
      const int b = prev ? prev[x] : 0;
      const int c = (prev && x >= 3) ? prev[x - 3] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: pred = paeth(a, b, c); break;
        default: throw Error(Errc::malformed, "unknown PNG filter " + std::to_string(filter));
      }
      dst[x] = static_cast<std::uint8_t>(src[x] + pred);
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const Raster8& image) {
  check_raster(image);
  const std::size_t stride = image.width * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * image.height);
  for (std::size_t y = 0; y < image.height; ++y) {
    raw.push_back(0);
    raw.insert(raw.end(), image.rgb.begin() + static_cast<std::ptrdiff_t>(y * stride),
               image.rgb.begin() + static_cast<std::ptrdiff_t>((y + 1) * stride));
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error(Errc::encode_error, "zlib compression failed");
  }
  packed.resize(packed_size);

  std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());
  std::vector<std::uint8_t> ihdr;
  store_be32(ihdr, static_cast<std::uint32_t>(image.width));
  store_be32(ihdr, static_cast<std::uint32_t>(image.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", packed);
  append_chunk(out, "IEND", {});
  return out;
}

Raster8 decode_raster(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
  if (bytes.size() >= 8 && std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    return decode_png(bytes);
  }
  throw Error(Errc::bad_magic, "neither PPM (P6) nor PNG", 0);
}

LdrImage read_ldr(std::span<const std::uint8_t> bytes, double exposure_ms) {
  Raster8 r = decode_raster(bytes);
  return LdrImage(r.width, r.height, std::move(r.rgb), exposure_ms);
}

std::vector<std::uint8_t> write_ldr(const LdrImage& image, LdrFormat format) {
  const Raster8 r = image.raster();
  return format == LdrFormat::png ? encode_png(r) : encode_ppm(r);
}

}  // namespace panolux
