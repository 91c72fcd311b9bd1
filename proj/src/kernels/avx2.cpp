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

#include "tables.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

#define PANOLUX_AVX2 __attribute__((target("avx2")))

namespace panolux::kernels {
namespace {

PANOLUX_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PANOLUX_AVX2 void luminance(const double* rgb, double* out, std::size_t pixels) {
  const __m128i stride = _mm_setr_epi32(0, 3, 6, 9);
  const __m256d kr = _mm256_set1_pd(kLumR);
  const __m256d kg = _mm256_set1_pd(kLumG);
  const __m256d kb = _mm256_set1_pd(kLumB);
  const __m256d eff = _mm256_set1_pd(kEfficacy);
  std::size_t p = 0;
  for (; p + 4 <= pixels; p += 4) {
    const double* base = rgb + 3 * p;
    const __m256d r = _mm256_i32gather_pd(base, stride, 8);
    const __m256d g = _mm256_i32gather_pd(base + 1, stride, 8);
    const __m256d b = _mm256_i32gather_pd(base + 2, stride, 8);
    const __m256d rg = _mm256_add_pd(_mm256_mul_pd(kr, r), _mm256_mul_pd(kg, g));
    const __m256d l = _mm256_add_pd(rg, _mm256_mul_pd(kb, b));
    _mm256_storeu_pd(out + p, _mm256_mul_pd(eff, l));
  }
  for (; p < pixels; ++p) {
    const double* px = rgb + 3 * p;
    out[p] = kEfficacy * (kLumR * px[0] + kLumG * px[1] + kLumB * px[2]);
  }
}

PANOLUX_AVX2 double compensated_sum(const double* x, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d y = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    const __m256d t = _mm256_add_pd(sum, y);
    c = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }
  alignas(32) double lanes[4];
  alignas(32) double comp[4];
  _mm256_store_pd(lanes, sum);
  _mm256_store_pd(comp, c);
  double s = 0.0;
  double cs = 0.0;
  auto add = [&](double v) {
    const double y = v - cs;
    const double t = s + y;
    cs = (t - s) - y;
    s = t;
  };
  for (int k = 0; k < 4; ++k) add(lanes[k]);
  for (int k = 0; k < 4; ++k) add(-comp[k]);
  for (; i < n; ++i) add(x[i]);
  return s;
}

PANOLUX_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i),
                                    _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

// Twelve samples (four pixels) per step in three registers whose lanes carry
// channels [0 1 2 0], [1 2 0 1], [2 0 1 2].
PANOLUX_AVX2 void channel_dot(const double* a, const double* b, std::size_t n,
                              double out[3]) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 12 <= n; i += 12) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    acc2 = _mm256_add_pd(acc2,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8)));
  }
  alignas(32) double l0[4];
  alignas(32) double l1[4];
  alignas(32) double l2[4];
  _mm256_store_pd(l0, acc0);
  _mm256_store_pd(l1, acc1);
  _mm256_store_pd(l2, acc2);
  double c0 = l0[0] + l0[3] + l1[2] + l2[1];
  double c1 = l0[1] + l1[0] + l1[3] + l2[2];
  double c2 = l0[2] + l1[1] + l2[0] + l2[3];
  for (; i < n; i += 3) {
    c0 += a[i] * b[i];
    c1 += a[i + 1] * b[i + 1];
    c2 += a[i + 2] * b[i + 2];
  }
  out[0] = c0;
  out[1] = c1;
  out[2] = c2;
}

PANOLUX_AVX2 inline __m256d sign(__m256d d) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_GT_OQ), one);
  const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_LT_OQ), one);
  return _mm256_sub_pd(pos, neg);
}

PANOLUX_AVX2 inline __m256d vabs(__m256d d) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), d);
}

inline double sign1(double d) { return static_cast<double>((d > 0.0) - (d < 0.0)); }

// The gradient entry of sample i is
//   sign(x_i - x_left) + sign(x_i - x_up) - sign(x_right - x_i) - sign(x_down - x_i)
// over the neighbours that exist, so each entry is computed independently.
PANOLUX_AVX2 double total_variation(const double* rgb, std::size_t width,
                                    std::size_t height, double* grad) {
  const std::size_t stride = 3 * width;
  __m256d vsum = _mm256_setzero_pd();
  double tail = 0.0;

  for (std::size_t r = 0; r < height; ++r) {
    const double* row = rgb + r * stride;
    const bool has_up = r > 0;
    const bool has_down = r + 1 < height;

    // value: horizontal pairs (j, j+3) and vertical pairs (j, j+stride)
    std::size_t j = 0;
    for (; j + 4 <= stride - 3; j += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + j + 3), _mm256_loadu_pd(row + j));
      vsum = _mm256_add_pd(vsum, vabs(d));
    }
    for (; j < stride - 3; ++j) tail += std::fabs(row[j + 3] - row[j]);
    if (has_down) {
      const double* below = row + stride;
      j = 0;
      for (; j + 4 <= stride; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(below + j), _mm256_loadu_pd(row + j));
        vsum = _mm256_add_pd(vsum, vabs(d));
      }
      for (; j < stride; ++j) tail += std::fabs(below[j] - row[j]);
    }

    // gradient
    double* grow = grad + r * stride;
    auto scalar_entry = [&](std::size_t k) {
      const double x = row[k];
      double g = 0.0;
      if (k >= 3) g += sign1(x - row[k - 3]);
      if (k + 3 < stride) g -= sign1(row[k + 3] - x);
      if (has_up) g += sign1(x - row[k - stride]);
      if (has_down) g -= sign1(row[k + stride] - x);
      grow[k] = g;
    };
    for (std::size_t k = 0; k < 3 && k < stride; ++k) scalar_entry(k);
    std::size_t k = 3;
    for (; k + 4 <= stride - 3; k += 4) {
      const __m256d x = _mm256_loadu_pd(row + k);
      __m256d g = _mm256_sub_pd(sign(_mm256_sub_pd(x, _mm256_loadu_pd(row + k - 3))),
                                sign(_mm256_sub_pd(_mm256_loadu_pd(row + k + 3), x)));
      if (has_up) {
        g = _mm256_add_pd(g, sign(_mm256_sub_pd(x, _mm256_loadu_pd(row + k - stride))));
      }
      if (has_down) {
        g = _mm256_sub_pd(g, sign(_mm256_sub_pd(_mm256_loadu_pd(row + k + stride), x)));
      }
      _mm256_storeu_pd(grow + k, g);
    }
    for (; k < stride; ++k) scalar_entry(k);
  }
  return hsum(vsum) + tail;
}

PANOLUX_AVX2 void merge_accumulate(const std::uint8_t* codes, std::size_t n, const double* g,
                                   const double* w, double log_dt, double* num,
                                   double* den) {
  // channel of lane l in a block starting at i is (i + l) % 3
  const __m128i phase[3] = {_mm_setr_epi32(0, 1, 2, 0), _mm_setr_epi32(1, 2, 0, 1),
                            _mm_setr_epi32(2, 0, 1, 2)};
  const __m128i three = _mm_set1_epi32(3);
  const __m256d vlog = _mm256_set1_pd(log_dt);
  std::size_t i = 0;
  unsigned ph = 0;
  for (; i + 4 <= n; i += 4) {
    std::int32_t packed;
    __builtin_memcpy(&packed, codes + i, 4);
    const __m128i z = _mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed));
    const __m128i gidx = _mm_add_epi32(_mm_mullo_epi32(z, three), phase[ph]);
    const __m256d wz = _mm256_i32gather_pd(w, z, 8);
    const __m256d gz = _mm256_i32gather_pd(g, gidx, 8);
    const __m256d contrib = _mm256_mul_pd(wz, _mm256_sub_pd(gz, vlog));
    _mm256_storeu_pd(num + i, _mm256_add_pd(_mm256_loadu_pd(num + i), contrib));
    _mm256_storeu_pd(den + i, _mm256_add_pd(_mm256_loadu_pd(den + i), wz));
    ph = (ph + 1) % 3;
  }
  for (; i < n; ++i) {
    const unsigned zz = codes[i];
    const double wz = w[zz];
    num[i] = num[i] + wz * (g[3 * zz + i % 3] - log_dt);
    den[i] = den[i] + wz;
  }
}

constexpr KernelTable kAvx2{
    Isa::avx2, luminance, compensated_sum, axpy, channel_dot, total_variation,
    merge_accumulate,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace panolux::kernels

#else

namespace panolux::kernels::detail {
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
}  // namespace panolux::kernels::detail

#endif
