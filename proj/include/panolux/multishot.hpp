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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "panolux/image.hpp"
#include "panolux/kernels.hpp"

namespace panolux {

/// Log-inverse response per channel: g[c][z] is the log exposure that produces
/// code z. Monotone non-decreasing, pinned at g[c][128] = 0.
struct CameraResponse {
  std::array<std::array<double, 256>, 3> g{};
  double smoothing_lambda = 0.0;
};

inline constexpr int kDefaultResponseSamples = 200;
inline constexpr double kDefaultSmoothing = 100.0;

/// Hat weight: z for z <= 127, 255 - z above.
constexpr double hat_weight(int z) { return z <= 127 ? z : 255 - z; }

struct PixelIndex {
  std::size_t row;
  std::size_t col;
};

/// `count` pixel centres on a uniform grid covering the raster.
std::vector<PixelIndex> response_sample_grid(std::size_t width, std::size_t height,
                                             std::size_t count);

/// Weighted least-squares recovery of the response curves from a bracket,
/// with a hat-weighted second-difference smoothness penalty.
/// Throws underdetermined, singular or non_monotone.
CameraResponse solve_response(const ExposureBracket& bracket,
                              int sample_count = kDefaultResponseSamples,
                              double smoothing_lambda = kDefaultSmoothing);

/// Hat-weighted average of g(Z) - ln(dt) per sample. Samples clipped in every
/// shot fall back to g(254) at the shortest saturating exposure or g(1) at the
/// longest exposure.
HdrImage merge_bracket(const ExposureBracket& bracket, const CameraResponse& response);
HdrImage merge_bracket(const ExposureBracket& bracket, const CameraResponse& response,
                       const kernels::KernelTable& k);

/// One simulated exposure: Z = clamp(round(255 (E dt / 1000)^(1/gamma) + noise), 0, 255).
template <class Rng>
LdrImage simulate_shot(const HdrImage& hdr, double exposure_ms, double gamma,
                       double noise_sigma, Rng& rng);

/// Simulated exposure bracket, deterministic for a given seed.
ExposureBracket simulate_bracket(const HdrImage& hdr, std::span<const double> exposures_ms,
                                 double gamma, double noise_sigma, std::uint64_t seed,
                                 std::string location_id = {});

template <class Rng>
LdrImage simulate_shot(const HdrImage& hdr, double exposure_ms, double gamma,
                       double noise_sigma, Rng& rng) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(Errc::invalid_argument, "gamma must be positive");
  }
  if (!(exposure_ms > 0.0) || !std::isfinite(exposure_ms)) {
    throw Error(Errc::invalid_argument, "exposure must be positive");
  }
  if (noise_sigma < 0.0 || !std::isfinite(noise_sigma)) {
    throw Error(Errc::invalid_argument, "noise sigma must be non-negative");
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto src = hdr.data();
  std::vector<std::uint8_t> codes(src.size());
  const double dt = exposure_ms / 1000.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    double v = 255.0 * std::pow(src[i] * dt, 1.0 / gamma);
    if (noise_sigma > 0.0) v += noise_sigma * noise(rng);
    v = std::round(v);
    codes[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return LdrImage(hdr.width(), hdr.height(), std::move(codes), exposure_ms);
}

}  // namespace panolux
