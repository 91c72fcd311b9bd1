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
#include <string_view>

// Data-parallel inner loops shared by the photometry, loss and merge code.
// Every kernel has a scalar reference implementation; SIMD variants are
// selected at runtime and are tested for equivalence against the reference.
namespace panolux::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

// Rec. 709 luminance weights and the Radiance luminous efficacy (lm/W).
inline constexpr double kLumR = 0.2126;
inline constexpr double kLumG = 0.7152;
inline constexpr double kLumB = 0.0722;
inline constexpr double kEfficacy = 179.0;

struct KernelTable {
  Isa isa;

  /// out[p] = 179 * (0.2126 r + 0.7152 g + 0.0722 b) for `pixels` interleaved pixels.
  void (*luminance)(const double* rgb, double* out, std::size_t pixels);

  /// Kahan-compensated sum.
  double (*compensated_sum)(const double* x, std::size_t n);

  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// Per-channel sum of a[i] * b[i] over `n` interleaved RGB samples (n % 3 == 0).
  void (*channel_dot)(const double* a, const double* b, std::size_t n, double out[3]);

  /// Anisotropic L1 total variation of an interleaved RGB raster. Returns the
  /// unnormalized sum of absolute neighbour differences and overwrites `grad`
  /// with its subgradient (sign(0) = 0).
  double (*total_variation)(const double* rgb, std::size_t width, std::size_t height,
                            double* grad);

  /// Weighted log-radiance accumulation of one bracket shot:
  ///   num[i] += w[z] * (g[3 z + i % 3] - log_dt),  den[i] += w[z],  z = codes[i].
  /// `g` holds the three response curves interleaved by code; n % 3 == 0.
  void (*merge_accumulate)(const std::uint8_t* codes, std::size_t n, const double* g,
                           const double* w, double log_dt, double* num, double* den);
};

const KernelTable& scalar_kernels() noexcept;

/// The AVX2 table, or nullptr when the build or the running CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Widest table supported by the CPU. PANOLUX_SIMD=scalar forces the reference path.
const KernelTable& active_kernels() noexcept;

}  // namespace panolux::kernels
