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

#include <cmath>

#include "panolux/kernels.hpp"

namespace panolux::kernels {
namespace {

void luminance(const double* rgb, double* out, std::size_t pixels) {
  for (std::size_t p = 0; p < pixels; ++p) {
    const double* px = rgb + 3 * p;
    out[p] = kEfficacy * (kLumR * px[0] + kLumG * px[1] + kLumB * px[2]);
  }
}

double compensated_sum(const double* x, std::size_t n) {
  double sum = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x[i] - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void channel_dot(const double* a, const double* b, std::size_t n, double out[3]) {
  double acc[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; i += 3) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
  }
  out[0] = acc[0];
  out[1] = acc[1];
  out[2] = acc[2];
}

inline double sign(double d) { return static_cast<double>((d > 0.0) - (d < 0.0)); }

double total_variation(const double* rgb, std::size_t width, std::size_t height,
                       double* grad) {
  const std::size_t stride = 3 * width;
  const std::size_t n = stride * height;
  for (std::size_t i = 0; i < n; ++i) grad[i] = 0.0;

  double value = 0.0;
  for (std::size_t r = 0; r < height; ++r) {
    const double* row = rgb + r * stride;
    double* grow = grad + r * stride;
    for (std::size_t j = 0; j + 3 < stride; ++j) {
      const double d = row[j + 3] - row[j];
      value += std::fabs(d);
      grow[j + 3] += sign(d);
      grow[j] -= sign(d);
    }
    if (r + 1 < height) {
      const double* below = row + stride;
      double* gbelow = grow + stride;
      for (std::size_t j = 0; j < stride; ++j) {
        const double d = below[j] - row[j];
        value += std::fabs(d);
        gbelow[j] += sign(d);
        grow[j] -= sign(d);
      }
    }
  }
  return value;
}

void merge_accumulate(const std::uint8_t* codes, std::size_t n, const double* g,
                      const double* w, double log_dt, double* num, double* den) {
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned z = codes[i];
    const double wz = w[z];
    num[i] = num[i] + wz * (g[3 * z + i % 3] - log_dt);
    den[i] = den[i] + wz;
  }
}

constexpr KernelTable kScalar{
    Isa::scalar, luminance, compensated_sum, axpy, channel_dot, total_variation,
    merge_accumulate,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace panolux::kernels
