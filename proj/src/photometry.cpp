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

#include "panolux/photometry.hpp"

#include <cmath>

#include "panolux/parallel.hpp"

namespace panolux {
namespace {

// Neumaier summation; order is fixed by the caller.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace

LuminanceMap::LuminanceMap(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  validate_panorama_dims(width, height);
  if (values_.size() != width * height) {
    throw Error(Errc::invalid_dimensions, "luminance map size does not match dimensions");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(Errc::invalid_argument, "luminance must be finite and non-negative");
    }
  }
}

LuminanceMap luminance_from_hdr(const HdrImage& hdr) {
  return luminance_from_hdr(hdr, kernels::active_kernels());
}

LuminanceMap luminance_from_hdr(const HdrImage& hdr, const kernels::KernelTable& k) {
  const std::size_t w = hdr.width();
  std::vector<double> out(hdr.pixel_count());
  const double* src = hdr.data().data();
  parallel_for(hdr.height(), [&](std::size_t r0, std::size_t r1) {
    k.luminance(src + r0 * w * 3, out.data() + r0 * w, (r1 - r0) * w);
  });
  return LuminanceMap(w, hdr.height(), std::move(out));
}

std::vector<double> illuminance_row_weights(std::size_t width, std::size_t height) {
  validate_panorama_dims(width, height);
  std::vector<double> weights(height);
  for (std::size_t r = 0; r < height; ++r) weights[r] = pixel_irradiance_weight(r, width, height);
  return weights;
}

double integrate_illuminance(const LuminanceMap& lum) {
  return integrate_illuminance(lum, kernels::active_kernels());
}

double integrate_illuminance(const LuminanceMap& lum, const kernels::KernelTable& k) {
  const std::size_t w = lum.width();
  const std::size_t upper = lum.height() / 2;
  const auto weights = illuminance_row_weights(w, lum.height());
  std::vector<double> row_sums(upper);
  const double* src = lum.data().data();
  parallel_for(upper, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) row_sums[r] = k.compensated_sum(src + r * w, w);
  });
  CompensatedSum total;
  for (std::size_t r = 0; r < upper; ++r) total.add(weights[r] * row_sums[r]);
  return total.value();
}

double illuminance_of_hdr(const HdrImage& hdr, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(Errc::invalid_argument, "illuminance scale must be positive");
  }
  return scale * integrate_illuminance(luminance_from_hdr(hdr));
}

CalibrationResult olse_scale(std::span<const LuxPair> pairs) {
  if (pairs.empty()) throw Error(Errc::invalid_argument, "calibration needs at least one pair");
  CompensatedSum sxy;
  CompensatedSum sxx;
  for (const auto& p : pairs) {
    if (!std::isfinite(p.estimated) || !std::isfinite(p.measured)) {
      throw Error(Errc::invalid_argument, "calibration pairs must be finite");
    }
    if (p.estimated < 0.0) throw Error(Errc::invalid_argument, "estimated lux must be positive");
    if (!(p.measured > 0.0)) throw Error(Errc::invalid_argument, "measured lux must be positive");
    sxy.add(p.estimated * p.measured);
    sxx.add(p.estimated * p.estimated);
  }
  if (!(sxx.value() > 0.0)) {
    throw Error(Errc::invalid_argument, "all estimated illuminances are zero");
  }
  const double scale = sxy.value() / sxx.value();
  CompensatedSum sq;
  for (const auto& p : pairs) {
    const double r = scale * p.estimated - p.measured;
    sq.add(r * r);
  }
  return {scale, std::sqrt(sq.value() / static_cast<double>(pairs.size()))};
}

}  // namespace panolux
