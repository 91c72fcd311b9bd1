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

// Shared scene builders and filesystem helpers for tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "panolux/cli.hpp"
#include "panolux/image.hpp"
#include "panolux/ldr_io.hpp"
#include "panolux/multishot.hpp"
#include "panolux/synthscene.hpp"

namespace fixture {

/// Replaces the lower hemisphere with a grey ramp that is log-linear in the
/// column, from lo to hi. Every sampled row then spans the full exposure range,
/// which is what response recovery needs; illuminance is unaffected.
inline panolux::HdrImage with_ramp_floor(const panolux::HdrImage& hdr, double lo, double hi) {
  auto v = hdr.to_vector();
  const std::size_t w = hdr.width();
  const std::size_t h = hdr.height();
  for (std::size_t r = h / 2; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double t = static_cast<double>(c) / static_cast<double>(w - 1);
      const double e = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
      for (std::size_t ch = 0; ch < 3; ++ch) v[(r * w + c) * 3 + ch] = e;
    }
  }
  return panolux::HdrImage(w, h, std::move(v));
}

/// The 5, 10, ..., 100 ms stops.
inline std::vector<double> twenty_stops() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back(5.0 * i);
  return out;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("panolux_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = panolux::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  panolux::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                      text.size()));
}

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = panolux::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

/// Writes each bracket shot as a PPM next to a JSON manifest and returns the
/// manifest path.
inline std::filesystem::path write_bracket(const TempDir& dir, const panolux::ExposureBracket& b,
                                           const std::string& stem, double gt_lux = -1.0) {
  std::ostringstream manifest;
  manifest.precision(17);
  manifest << "{\"location_id\": \"" << b.location_id << "\", \"entries\": [";
  for (std::size_t i = 0; i < b.shots.size(); ++i) {
    const std::string name = stem + "_" + std::to_string(i) + ".ppm";
    panolux::write_file(dir / name, panolux::write_ldr(b.shots[i]));
    manifest << (i ? ", " : "") << "{\"path\": \"" << name
             << "\", \"exposure_ms\": " << b.shots[i].exposure_ms() << "}";
  }
  manifest << "]";
  if (gt_lux > 0) manifest << ", \"gt_lux\": " << gt_lux;
  manifest << "}";
  const auto path = dir / (stem + ".json");
  write_text(path, manifest.str());
  return path;
}

}  // namespace fixture
