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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panolux/error.hpp"

namespace panolux {

inline constexpr double kPi = 3.14159265358979323846;

/// Checks the equirectangular raster rule: width = 2 * height, height >= 2 and even.
void validate_panorama_dims(std::size_t width, std::size_t height);

/// Linear-radiance equirectangular panorama, interleaved RGB, row 0 at the zenith.
class HdrImage {
 public:
  HdrImage(std::size_t width, std::size_t height, std::vector<double> rgb);

  /// All-zero image of the given size.
  static HdrImage zeros(std::size_t width, std::size_t height);
  static HdrImage filled(std::size_t width, std::size_t height, double value);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }
  std::size_t sample_count() const noexcept { return rgb_.size(); }

  std::span<const double> data() const noexcept { return rgb_; }
  double at(std::size_t row, std::size_t col, std::size_t channel) const {
    return rgb_[(row * width_ + col) * 3 + channel];
  }

  /// Copy of the samples, for building a modified image.
  std::vector<double> to_vector() const { return rgb_; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> rgb_;
};

/// 8-bit interleaved RGB raster with no geometric constraints; the codec currency.
struct Raster8 {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;
};

/// 8-bit exposure of a panorama. Width must be twice the height.
class LdrImage {
 public:
  LdrImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb,
           double exposure_ms);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const std::uint8_t> data() const noexcept { return rgb_; }
  double exposure_ms() const noexcept { return exposure_ms_; }

  std::uint8_t at(std::size_t row, std::size_t col, std::size_t channel) const {
    return rgb_[(row * width_ + col) * 3 + channel];
  }

  Raster8 raster() const { return {width_, height_, rgb_}; }
  LdrImage with_exposure(double exposure_ms) const {
    return LdrImage(width_, height_, rgb_, exposure_ms);
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> rgb_;
  double exposure_ms_;
};

struct ExposureBracket {
  std::vector<LdrImage> shots;
  std::string location_id;
};

/// Returns the bracket when it has at least two shots of identical size with
/// distinct exposure times; throws too_few_shots, mismatched_dimensions or
/// duplicate_exposure otherwise.
const ExposureBracket& validate_bracket(const ExposureBracket& bracket);

struct IlluminanceSample {
  std::string location_id;
  double lux;

  IlluminanceSample(std::string id, double value);
};

/// Per-sample partial derivatives of a scalar loss, laid out like HdrImage.
struct GradientField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;

  static GradientField zeros(std::size_t width, std::size_t height) {
    return {width, height, std::vector<double>(width * height * 3, 0.0)};
  }
};

struct Direction {
  double theta;  // zenith angle, radians
  double phi;    // azimuth, radians
};

/// Direction of a pixel center: theta = pi (row + 0.5) / height, phi = 2 pi (col + 0.5) / width.
Direction pixel_direction(std::size_t row, std::size_t col, std::size_t width, std::size_t height);

/// Solid angle sin(theta) dtheta dphi of one pixel in the given row.
double pixel_solid_angle(std::size_t row, std::size_t width, std::size_t height);

/// Cosine-weighted solid angle sin(theta) cos(theta) dtheta dphi of one pixel,
/// zero for rows below the horizon.
double pixel_irradiance_weight(std::size_t row, std::size_t width, std::size_t height);

}  // namespace panolux
