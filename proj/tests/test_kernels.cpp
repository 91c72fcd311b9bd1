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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "panolux/kernels.hpp"
#include "panolux/losses.hpp"
#include "panolux/multishot.hpp"
#include "panolux/photometry.hpp"

using namespace panolux;
using panolux::kernels::KernelTable;

namespace {

// Sizes straddle the vector width so every tail length is exercised.
const std::size_t kPixelCounts[] = {1, 2, 3, 4, 5, 7, 8, 13, 64, 1001};

double abs_sum(const std::vector<double>& v) {
  double t = 0.0;
  for (double x : v) t += std::fabs(x);
  return t;
}

std::vector<double> signed_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unit(rng) * std::exp(4.0 * unit(rng));
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar table is always available") {
  CHECK(kernels::scalar_kernels().isa == kernels::Isa::scalar);
  CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
  const KernelTable& active = kernels::active_kernels();
  CHECK((active.isa == kernels::Isa::scalar || kernels::avx2_kernels() != nullptr));
}

TEST_CASE("scalar luminance matches the definition") {
  std::mt19937_64 rng(1);
  const auto rgb = oracle::random_positive(rng, 300, 1e-3, 1e3);
  std::vector<double> out(100);
  kernels::scalar_kernels().luminance(rgb.data(), out.data(), 100);
  for (std::size_t p = 0; p < 100; ++p) {
    CHECK(out[p] == doctest::Approx(oracle::luminance(rgb[3 * p], rgb[3 * p + 1], rgb[3 * p + 2]))
                        .epsilon(1e-15));
  }
}

TEST_CASE("compensated sum keeps increments below the leading ulp") {
  std::vector<double> v(1001, 1e-16);
  v[0] = 1.0;
  double naive = 0.0;
  for (double x : v) naive += x;
  CHECK(naive == 1.0);
  CHECK(kernels::scalar_kernels().compensated_sum(v.data(), v.size()) ==
        doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}

TEST_CASE("property: SIMD kernels agree with the scalar reference") {
  const KernelTable* simd = kernels::avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 unavailable on this host; equivalence not exercised");
    return;
  }
  const KernelTable& ref = kernels::scalar_kernels();
  std::mt19937_64 rng(2);

  for (std::size_t pixels : kPixelCounts) {
    const std::size_t n = 3 * pixels;
    const auto rgb = oracle::random_positive(rng, n, 1e-3, 1e3);
    const auto x = signed_values(rng, n);

    std::vector<double> la(pixels);
    std::vector<double> lb(pixels);
    ref.luminance(rgb.data(), la.data(), pixels);
    simd->luminance(rgb.data(), lb.data(), pixels);
    CHECK(la == lb);

    std::vector<double> ya = signed_values(rng, n);
    std::vector<double> yb = ya;
    ref.axpy(0.37, x.data(), ya.data(), n);
    simd->axpy(0.37, x.data(), yb.data(), n);
    CHECK(ya == yb);

    // reductions reassociate across lanes: equal up to a few ulps of sum |x|
    const double sa = ref.compensated_sum(x.data(), n);
    const double sb = simd->compensated_sum(x.data(), n);
    CHECK(std::fabs(sa - sb) <= 1e-14 * abs_sum(x));

    double da[3];
    double db[3];
    ref.channel_dot(x.data(), rgb.data(), n, da);
    simd->channel_dot(x.data(), rgb.data(), n, db);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = x[i] * rgb[i];
    for (int c = 0; c < 3; ++c) CHECK(std::fabs(da[c] - db[c]) <= 1e-13 * abs_sum(prod));

    std::vector<std::uint8_t> codes(n);
    for (auto& z : codes) z = static_cast<std::uint8_t>(rng() % 256);
    std::vector<double> g(256 * 3);
    std::vector<double> w(256);
    for (std::size_t z = 0; z < 256; ++z) {
      w[z] = hat_weight(static_cast<int>(z));
      for (std::size_t c = 0; c < 3; ++c) g[3 * z + c] = std::log((z + 1.0) / 256.0) * (1.0 + 0.1 * c);
    }
    std::vector<double> na(n, 0.5);
    std::vector<double> nb(n, 0.5);
    std::vector<double> ea(n, 1.0);
    std::vector<double> eb(n, 1.0);
    ref.merge_accumulate(codes.data(), n, g.data(), w.data(), std::log(25.0), na.data(), ea.data());
    simd->merge_accumulate(codes.data(), n, g.data(), w.data(), std::log(25.0), nb.data(), eb.data());
    CHECK(na == nb);
    CHECK(ea == eb);
  }

  for (std::size_t h : {1, 2, 3, 8, 17}) {
    const std::size_t width = 2 * h;
    auto img = oracle::random_positive(rng, width * h * 3, 0.1, 10.0);
    img[0] = img[3];  // one tie, where the subgradient is zero
    std::vector<double> ga(img.size());
    std::vector<double> gb(img.size());
    const double va = ref.total_variation(img.data(), width, h, ga.data());
    const double vb = simd->total_variation(img.data(), width, h, gb.data());
    CHECK(va == doctest::Approx(vb).epsilon(1e-13));
    CHECK(ga == gb);
  }
}

TEST_CASE("property: library entry points agree across kernel tables") {
  const KernelTable* simd = kernels::avx2_kernels();
  if (simd == nullptr) return;
  const KernelTable& ref = kernels::scalar_kernels();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t h = 2 * (1 + rng() % 32);
    const HdrImage hdr(2 * h, h, oracle::random_positive(rng, 2 * h * h * 3, 1e-2, 1e2));
    const LuminanceMap a = luminance_from_hdr(hdr, ref);
    const LuminanceMap b = luminance_from_hdr(hdr, *simd);
    CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
    CHECK(integrate_illuminance(a, ref) == doctest::Approx(integrate_illuminance(a, *simd)).epsilon(1e-13));
    CHECK(tv_loss(hdr, ref).grad.data == tv_loss(hdr, *simd).grad.data);

    const auto bracket = simulate_bracket(hdr, std::vector<double>{5.0, 30.0, 90.0}, 2.2, 1.0, rng());
    CameraResponse r;
    for (auto& g : r.g) {
      for (std::size_t z = 0; z < 256; ++z) g[z] = 2.2 * std::log((z + 0.5) / 255.5);
    }
    CHECK(merge_bracket(bracket, r, ref).to_vector() == merge_bracket(bracket, r, *simd).to_vector());
  }
}

}  // TEST_SUITE
