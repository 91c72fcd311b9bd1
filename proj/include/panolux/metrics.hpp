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
#include "panolux/photometry.hpp"

namespace panolux {

struct MetricReport {
  std::optional<double> mean_std;  // absent when no exposure stack was evaluated
  double acc_25 = 0.0;
  double acc_10 = 0.0;
  std::size_t n_locations = 0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_line() const;
};

/// Mean over pixels and channels of the population standard deviation of
/// ln(H + 1e-6) across the images.
double mean_std_consistency(std::span<const HdrImage> hdrs);

/// Fraction of pairs with |estimated - measured| / measured <= margin.
double accuracy_within(std::span<const LuxPair> pairs, double margin);

/// Builds a report from lux pairs and, optionally, an exposure stack.
MetricReport make_report(std::span<const LuxPair> pairs,
                         std::span<const HdrImage> stack = {});

struct FalseColorImage {
  Raster8 raster;
  double lo;
  double hi;
};

/// Fixed 256-entry blue -> cyan -> green -> yellow -> red ramp.
const std::array<std::array<std::uint8_t, 3>, 256>& false_color_ramp();

/// Ramp index of one luminance value in a log10 window [lo, hi].
std::size_t false_color_index(double luminance, double lo, double hi);

FalseColorImage false_color(const LuminanceMap& lum, double lo, double hi);

}  // namespace panolux
