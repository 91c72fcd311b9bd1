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

#include "panolux/image.hpp"

#include <cmath>
#include <limits>

namespace panolux {

void validate_panorama_dims(std::size_t width, std::size_t height) {
  if (height < 2 || height % 2 != 0 || width != 2 * height) {
    throw Error(Errc::invalid_dimensions,
                "panorama must be 2H x H with even H >= 2, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
}

HdrImage::HdrImage(std::size_t width, std::size_t height, std::vector<double> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  validate_panorama_dims(width, height);
  if (rgb_.size() != width * height * 3) {
    throw Error(Errc::invalid_dimensions, "sample count does not match dimensions");
  }
  for (std::size_t i = 0; i < rgb_.size(); ++i) {
    if (!std::isfinite(rgb_[i]) || rgb_[i] < 0.0) {
      throw Error(Errc::invalid_argument,
                  "HDR sample " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

HdrImage HdrImage::zeros(std::size_t width, std::size_t height) {
  return filled(width, height, 0.0);
}

HdrImage HdrImage::filled(std::size_t width, std::size_t height, double value) {
  return HdrImage(width, height, std::vector<double>(width * height * 3, value));
}

LdrImage::LdrImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb,
                   double exposure_ms)
    : width_(width), height_(height), rgb_(std::move(rgb)), exposure_ms_(exposure_ms) {
  // Height 1 is allowed here; anything that expands an LDR into an HdrImage
  // enforces the full panorama rule.
  if (height == 0 || width != 2 * height) {
    throw Error(Errc::invalid_dimensions,
                "LDR panorama must be 2H x H, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (rgb_.size() != width * height * 3) {
    throw Error(Errc::invalid_dimensions, "sample count does not match dimensions");
  }
  if (!(exposure_ms > 0.0) || !std::isfinite(exposure_ms)) {
    throw Error(Errc::invalid_argument, "exposure must be positive and finite");
  }
}

const ExposureBracket& validate_bracket(const ExposureBracket& bracket) {
  const auto& shots = bracket.shots;
  if (shots.size() < 2) {
    throw Error(Errc::too_few_shots,
                "bracket needs at least 2 shots, got " + std::to_string(shots.size()));
  }
  for (std::size_t i = 1; i < shots.size(); ++i) {
    if (shots[i].width() != shots[0].width() || shots[i].height() != shots[0].height()) {
      throw Error(Errc::mismatched_dimensions,
                  "shot " + std::to_string(i) + " differs in size from shot 0");
    }
  }
  for (std::size_t i = 0; i < shots.size(); ++i) {
    for (std::size_t j = i + 1; j < shots.size(); ++j) {
      if (shots[i].exposure_ms() == shots[j].exposure_ms()) {
        throw Error(Errc::duplicate_exposure, "shots " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " share exposure " +
                                                  std::to_string(shots[i].exposure_ms()) +
                                                  " ms");
      }
    }
  }
  return bracket;
}

IlluminanceSample::IlluminanceSample(std::string id, double value)
    : location_id(std::move(id)), lux(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::invalid_argument, "illuminance reading must be positive");
  }
}

Direction pixel_direction(std::size_t row, std::size_t col, std::size_t width,
                          std::size_t height) {
  if (row >= height || col >= width) {
    throw Error(Errc::index_out_of_range, "pixel (" + std::to_string(row) + ", " +
                                              std::to_string(col) + ") outside " +
                                              std::to_string(width) + "x" +
                                              std::to_string(height));
  }
  return {kPi * (static_cast<double>(row) + 0.5) / static_cast<double>(height),
          2.0 * kPi * (static_cast<double>(col) + 0.5) / static_cast<double>(width)};
}

double pixel_solid_angle(std::size_t row, std::size_t width, std::size_t height) {
  const double theta = pixel_direction(row, 0, width, height).theta;
  const double dtheta = kPi / static_cast<double>(height);
  const double dphi = 2.0 * kPi / static_cast<double>(width);
  return std::sin(theta) * dtheta * dphi;
}

double pixel_irradiance_weight(std::size_t row, std::size_t width, std::size_t height) {
  const double theta = pixel_direction(row, 0, width, height).theta;
  if (!(theta < kPi / 2)) return 0.0;
  const double dtheta = kPi / static_cast<double>(height);
  const double dphi = 2.0 * kPi / static_cast<double>(width);
  return std::sin(theta) * std::cos(theta) * dtheta * dphi;
}

}  // namespace panolux
