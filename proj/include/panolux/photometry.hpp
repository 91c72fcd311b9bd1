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
#include <span>
#include <vector>

#include "panolux/image.hpp"
#include "panolux/kernels.hpp"

namespace panolux {

/// Per-pixel luminance in cd/m^2, same layout as the source panorama.
class LuminanceMap {
 public:
  LuminanceMap(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const double> data() const noexcept { return values_; }
  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> values_;
};

/// L = 179 * (0.2126 R + 0.7152 G + 0.0722 B)
LuminanceMap luminance_from_hdr(const HdrImage& hdr);
LuminanceMap luminance_from_hdr(const HdrImage& hdr, const kernels::KernelTable& k);

/// Per-row weight sin(theta) cos(theta) dtheta dphi for rows above the
/// horizon, zero below. Illuminance is sum_r weight[r] * sum_c L[r][c].
std::vector<double> illuminance_row_weights(std::size_t width, std::size_t height);

/// Midpoint-rule cosine-weighted integral of luminance over the upper hemisphere.
double integrate_illuminance(const LuminanceMap& lum);
double integrate_illuminance(const LuminanceMap& lum, const kernels::KernelTable& k);

/// scale * integrate_illuminance(luminance_from_hdr(hdr)); scale must be positive.
double illuminance_of_hdr(const HdrImage& hdr, double scale);

struct LuxPair {
  double estimated;
  double measured;
};

struct CalibrationResult {
  double scale;
  double residual_rms;
};

/// Least-squares multiplicative factor s minimizing sum (s x - y)^2 (no intercept).
CalibrationResult olse_scale(std::span<const LuxPair> pairs);

}  // namespace panolux
