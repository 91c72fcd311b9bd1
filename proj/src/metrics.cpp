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

#include "panolux/metrics.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"
#include <sstream>

namespace panolux {
namespace {

constexpr double kLogEpsilon = 1e-6;

std::string number(double v) {
  // shortest round-trip representation, identical to the JSON output
  return nlohmann::json(v).dump();
}

}  // namespace

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["mean_std"] = mean_std ? nlohmann::ordered_json(*mean_std) : nlohmann::ordered_json(nullptr);
  j["acc_25"] = acc_25;
  j["acc_10"] = acc_10;
  j["n_locations"] = n_locations;
  return j.dump();
}

std::string MetricReport::csv_header() { return "mean_std,acc_25,acc_10,n_locations"; }

std::string MetricReport::to_csv_line() const {
  std::ostringstream os;
  os << (mean_std ? number(*mean_std) : std::string()) << ',' << number(acc_25) << ','
     << number(acc_10) << ',' << n_locations;
  return os.str();
}

double mean_std_consistency(std::span<const HdrImage> hdrs) {
  if (hdrs.size() < 2) {
    throw Error(Errc::invalid_argument, "consistency needs at least two images");
  }
  for (const auto& h : hdrs) {
    if (h.width() != hdrs[0].width() || h.height() != hdrs[0].height()) {
      throw Error(Errc::mismatched_dimensions, "images in the stack differ in size");
    }
  }
  const std::size_t n = hdrs[0].sample_count();
  const double k = static_cast<double>(hdrs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (const auto& h : hdrs) mean += std::log(h.data()[i] + kLogEpsilon);
    mean /= k;
    double var = 0.0;
    for (const auto& h : hdrs) {
      const double d = std::log(h.data()[i] + kLogEpsilon) - mean;
      var += d * d;
    }
    total += std::sqrt(var / k);
  }
  return total / static_cast<double>(n);
}

double accuracy_within(std::span<const LuxPair> pairs, double margin) {
  if (pairs.empty()) throw Error(Errc::invalid_argument, "accuracy needs at least one pair");
  if (!(margin > 0.0)) throw Error(Errc::invalid_argument, "margin must be positive");
  std::size_t hits = 0;
  for (const auto& p : pairs) {
    if (!(p.measured > 0.0)) throw Error(Errc::invalid_argument, "measured lux must be positive");
    if (std::fabs(p.estimated - p.measured) <= margin * p.measured) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

MetricReport make_report(std::span<const LuxPair> pairs, std::span<const HdrImage> stack) {
  MetricReport r;
  r.acc_25 = accuracy_within(pairs, 0.25);
  r.acc_10 = accuracy_within(pairs, 0.10);
  r.n_locations = pairs.size();
  if (!stack.empty()) r.mean_std = mean_std_consistency(stack);
  return r;
}

const std::array<std::array<std::uint8_t, 3>, 256>& false_color_ramp() {
  static const auto ramp = [] {
    constexpr double stops[5][3] = {
        {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
    std::array<std::array<std::uint8_t, 3>, 256> out{};
    for (std::size_t i = 0; i < 256; ++i) {
      const double t = static_cast<double>(i) / 255.0 * 4.0;
      const std::size_t seg = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
      const double f = t - static_cast<double>(seg);
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = stops[seg][c] + f * (stops[seg + 1][c] - stops[seg][c]);
        out[i][c] = static_cast<std::uint8_t>(std::lround(v));
      }
    }
    return out;
  }();
  return ramp;
}

std::size_t false_color_index(double luminance, double lo, double hi) {
  const double span = std::log10(hi) - std::log10(lo);
  const double t = std::clamp((std::log10(luminance + kLogEpsilon) - std::log10(lo)) / span, 0.0, 1.0);
  return static_cast<std::size_t>(std::floor(t * 255.0 + 0.5));
}

FalseColorImage false_color(const LuminanceMap& lum, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw Error(Errc::invalid_argument, "false color window needs 0 < lo < hi");
  }
  const auto& ramp = false_color_ramp();
  FalseColorImage out{{lum.width(), lum.height(), {}}, lo, hi};
  out.raster.rgb.reserve(lum.data().size() * 3);
  for (double v : lum.data()) {
    const auto& c = ramp[false_color_index(v, lo, hi)];
    out.raster.rgb.insert(out.raster.rgb.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace panolux
