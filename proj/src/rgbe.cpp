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

#include "panolux/rgbe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>

namespace panolux {
namespace {

constexpr std::size_t kMinRleWidth = 8;
constexpr std::size_t kMaxRleWidth = 32767;
constexpr std::size_t kMaxDimension = 1 << 16;
constexpr std::size_t kMinRunLength = 4;

bool rle_width(std::size_t width) { return width >= kMinRleWidth && width <= kMaxRleWidth; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

// Parses "-Y <H> +X <W>" and nothing else.
bool parse_resolution(std::string_view line, std::size_t& height, std::size_t& width) {
  auto expect = [&](std::string_view tok) {
    if (line.substr(0, tok.size()) != tok) return false;
    line.remove_prefix(tok.size());
    return true;
  };
  auto number = [&](std::size_t& out) {
    const auto res = std::from_chars(line.data(), line.data() + line.size(), out);
    if (res.ec != std::errc{} || res.ptr == line.data()) return false;
    line.remove_prefix(static_cast<std::size_t>(res.ptr - line.data()));
    return true;
  };
  return expect("-Y ") && number(height) && expect(" +X ") && number(width) && line.empty();
}

// Bruce Walter's run finder: runs of at least kMinRunLength become
// (128 + count, value), everything else literal chunks of at most 128 bytes.
void write_rle_component(const std::uint8_t* data, std::size_t n,
                         std::vector<std::uint8_t>& out) {
  std::size_t cur = 0;
  while (cur < n) {
    std::size_t beg_run = cur;
    std::size_t run_count = 0;
    std::size_t old_run_count = 0;
    while (run_count < kMinRunLength && beg_run < n) {
      beg_run += run_count;
      old_run_count = run_count;
      run_count = 1;
      while (beg_run + run_count < n && run_count < 127 &&
             data[beg_run] == data[beg_run + run_count]) {
        ++run_count;
      }
    }
    if (old_run_count > 1 && old_run_count == beg_run - cur) {
      out.push_back(static_cast<std::uint8_t>(128 + old_run_count));
      out.push_back(data[cur]);
      cur = beg_run;
    }
    while (cur < beg_run) {
      const std::size_t literal = std::min<std::size_t>(beg_run - cur, 128);
      out.push_back(static_cast<std::uint8_t>(literal));
      out.insert(out.end(), data + cur, data + cur + literal);
      cur += literal;
    }
    if (run_count >= kMinRunLength) {
      out.push_back(static_cast<std::uint8_t>(128 + run_count));
      out.push_back(data[beg_run]);
      cur += run_count;
    }
  }
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t next(const char* what) {
    if (pos_ >= bytes_.size()) throw Error(Errc::truncated, what, pos_);
    return bytes_[pos_++];
  }
  const std::uint8_t* take(std::size_t n, const char* what) {
    if (remaining() < n) throw Error(Errc::truncated, what, pos_);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool peek_rle_header() const {
    if (remaining() < 4) return false;
    const std::uint8_t* p = bytes_.data() + pos_;
    return p[0] == 2 && p[1] == 2 && (p[2] & 0x80) == 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

std::array<std::uint8_t, 4> encode_rgbe_pixel(double r, double g, double b) {
  if (!std::isfinite(r) || !std::isfinite(g) || !std::isfinite(b)) {
    throw Error(Errc::encode_error, "cannot encode non-finite sample");
  }
  if (r < 0.0 || g < 0.0 || b < 0.0) {
    throw Error(Errc::encode_error, "cannot encode negative sample");
  }
  const double v = std::max({r, g, b});
  if (v < 1e-32) return {0, 0, 0, 0};

  int e = 0;
  std::frexp(v, &e);
  double scale = std::ldexp(256.0, -e);
  if (std::nearbyint(v * scale) >= 256.0) {
    ++e;
    scale = std::ldexp(256.0, -e);
  }
  if (e + 128 > 255) throw Error(Errc::encode_error, "sample exceeds RGBE range");
  auto mant = [&](double c) {
    return static_cast<std::uint8_t>(std::min(255.0, std::nearbyint(c * scale)));
  };
  return {mant(r), mant(g), mant(b), static_cast<std::uint8_t>(e + 128)};
}

std::array<double, 3> decode_rgbe_pixel(std::array<std::uint8_t, 4> rgbe) {
  if (rgbe[3] == 0) return {0.0, 0.0, 0.0};
  const double f = std::ldexp(1.0, static_cast<int>(rgbe[3]) - (128 + 8));
  return {rgbe[0] * f, rgbe[1] * f, rgbe[2] * f};
}

RgbeHeader parse_rgbe_header(std::span<const std::uint8_t> bytes, std::size_t& data_offset) {
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= bytes.size()) return false;
    const auto* begin = bytes.data() + pos;
    const auto* end = std::find(begin, bytes.data() + bytes.size(), std::uint8_t{'\n'});
    if (end == bytes.data() + bytes.size()) return false;
    line = trim(std::string_view(reinterpret_cast<const char*>(begin),
                                 static_cast<std::size_t>(end - begin)));
    pos = static_cast<std::size_t>(end - bytes.data()) + 1;
    return true;
  };

  std::string_view line;
  if (!next_line(line) || (line != "#?RADIANCE" && line != "#?RGBE")) {
    throw Error(Errc::bad_magic, "missing #?RADIANCE signature", 0);
  }

  RgbeHeader header;
  for (;;) {
    const std::size_t line_start = pos;
    if (!next_line(line)) throw Error(Errc::truncated, "header not terminated", line_start);
    if (line.empty()) break;
    if (line.starts_with("FORMAT=")) {
      header.format_tag = std::string(line.substr(7));
      if (header.format_tag != "32-bit_rle_rgbe") {
        throw Error(Errc::unsupported_format, "unsupported format " + header.format_tag,
                    line_start);
      }
    } else if (line.starts_with("EXPOSURE=")) {
      std::string_view text = trim(line.substr(9));
      while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
      double value = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
      if (res.ec != std::errc{} || !(value > 0.0)) {
        throw Error(Errc::malformed, "bad EXPOSURE value", line_start);
      }
      header.exposure = header.exposure.value_or(1.0) * value;
    }
  }
  if (header.format_tag.empty()) {
    throw Error(Errc::unsupported_format, "header has no FORMAT line", pos);
  }

  const std::size_t res_start = pos;
  if (!next_line(line) || !parse_resolution(line, header.height, header.width)) {
    throw Error(Errc::bad_resolution, "expected '-Y <H> +X <W>'", res_start);
  }
  if (header.height == 0 || header.width == 0 || header.height > kMaxDimension ||
      header.width > kMaxDimension) {
    throw Error(Errc::bad_resolution, "resolution out of range", res_start);
  }
  data_offset = pos;
  return header;
}

RgbeFile read_rgbe_file(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  RgbeHeader header = parse_rgbe_header(bytes, offset);
  const std::size_t width = header.width;
  const std::size_t height = header.height;
  validate_panorama_dims(width, height);

  // Reject before allocating when the stream cannot possibly hold the image.
  const std::size_t min_line =
      rle_width(width) ? std::min(4 * width, 4 + 8 * ((width + 126) / 127)) : 4 * width;
  if ((bytes.size() - offset) / min_line < height) {
    throw Error(Errc::truncated, "stream too short for declared resolution", bytes.size());
  }

  std::vector<double> rgb(width * height * 3);
  std::vector<std::uint8_t> line(4 * width);
  Reader in(bytes, offset);

  for (std::size_t row = 0; row < height; ++row) {
    if (rle_width(width) && in.peek_rle_header()) {
      const std::size_t start = in.pos();
      const std::uint8_t* h = in.take(4, "scanline header");
      const std::size_t declared = (static_cast<std::size_t>(h[2]) << 8) | h[3];
      if (declared != width) {
        throw Error(Errc::malformed, "scanline width does not match header", start);
      }
      for (std::size_t comp = 0; comp < 4; ++comp) {
        std::uint8_t* dst = line.data() + comp * width;
        std::size_t x = 0;
        while (x < width) {
          const std::size_t at = in.pos();
          std::size_t count = in.next("run length");
          if (count > 128) {
            count -= 128;
            if (x + count > width) throw Error(Errc::rle_overrun, "run past scanline end", at);
            const std::uint8_t value = in.next("run value");
            std::fill_n(dst + x, count, value);
          } else {
            if (count == 0) throw Error(Errc::malformed, "zero-length literal", at);
            if (x + count > width) {
              throw Error(Errc::rle_overrun, "literal past scanline end", at);
            }
            const std::uint8_t* src = in.take(count, "literal bytes");
            std::copy_n(src, count, dst + x);
          }
          x += count;
        }
      }
      for (std::size_t col = 0; col < width; ++col) {
        const auto px = decode_rgbe_pixel({line[col], line[width + col], line[2 * width + col],
                                           line[3 * width + col]});
        std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(
                                                          (row * width + col) * 3));
      }
    } else {
      const std::uint8_t* src = in.take(4 * width, "flat scanline");
      for (std::size_t col = 0; col < width; ++col) {
        const std::uint8_t* q = src + 4 * col;
        const auto px = decode_rgbe_pixel({q[0], q[1], q[2], q[3]});
        std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(
                                                          (row * width + col) * 3));
      }
    }
  }
  return {std::move(header), HdrImage(width, height, std::move(rgb))};
}

HdrImage read_rgbe(std::span<const std::uint8_t> bytes) {
  return read_rgbe_file(bytes).image;
}

std::vector<std::uint8_t> write_rgbe(const HdrImage& image, ScanlineEncoding encoding) {
  const std::size_t width = image.width();
  const std::size_t height = image.height();
  const std::string header = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " +
                             std::to_string(height) + " +X " + std::to_string(width) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + width * height * 4);

  const bool rle = encoding == ScanlineEncoding::automatic && rle_width(width);
  const auto data = image.data();
  std::vector<std::uint8_t> planes(4 * width);
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const double* px = data.data() + (row * width + col) * 3;
      const auto q = encode_rgbe_pixel(px[0], px[1], px[2]);
      if (rle) {
        for (std::size_t k = 0; k < 4; ++k) planes[k * width + col] = q[k];
      } else {
        out.insert(out.end(), q.begin(), q.end());
      }
    }
    if (rle) {
      out.push_back(2);
      out.push_back(2);
      out.push_back(static_cast<std::uint8_t>(width >> 8));
      out.push_back(static_cast<std::uint8_t>(width & 0xff));
      for (std::size_t k = 0; k < 4; ++k) write_rle_component(planes.data() + k * width, width, out);
    }
  }
  return out;
}

}  // namespace panolux
