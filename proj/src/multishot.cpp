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

#include "panolux/multishot.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

#include "panolux/parallel.hpp"

namespace panolux {
namespace {

constexpr int kPinCode = 128;
constexpr double kMonotoneSlack = 1e-9;

std::array<double, 256> hat_table() {
  std::array<double, 256> w{};
  for (int z = 0; z < 256; ++z) w[static_cast<std::size_t>(z)] = hat_weight(z);
  return w;
}

// Solves one channel. The ln E unknowns have a diagonal normal block, so they
// are eliminated and only the 256x256 Schur complement is factorized.
std::array<double, 256> solve_channel(const ExposureBracket& bracket,
                                      std::span<const PixelIndex> samples, std::size_t channel,
                                      double lambda) {
  const auto w = hat_table();
  const std::size_t shots = bracket.shots.size();
  std::vector<double> log_dt(shots);
  for (std::size_t j = 0; j < shots; ++j) log_dt[j] = std::log(bracket.shots[j].exposure_ms());

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(256, 256);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(256);

  std::size_t used_samples = 0;
  std::size_t data_rows = 0;
  std::vector<double> cross(256);
  std::vector<int> touched;
  touched.reserve(shots);
  for (const auto& s : samples) {
    // c_z = -sum_j W_ij [Z_ij = z],  d = sum_j W_ij,  b = -sum_j W_ij ln dt_j
    double d = 0.0;
    double bx = 0.0;
    touched.clear();
    for (std::size_t j = 0; j < shots; ++j) {
      const int z = bracket.shots[j].at(s.row, s.col, channel);
      const double wz = w[static_cast<std::size_t>(z)];
      const double ww = wz * wz;
      if (ww == 0.0) continue;
      ++data_rows;
      normal(z, z) += ww;
      rhs(z) += ww * log_dt[j];
      if (cross[static_cast<std::size_t>(z)] == 0.0) touched.push_back(z);
      cross[static_cast<std::size_t>(z)] -= ww;
      d += ww;
      bx -= ww * log_dt[j];
    }
    if (d == 0.0) continue;  // clipped in every shot: carries no information
    ++used_samples;
    for (int a : touched) {
      const double ca = cross[static_cast<std::size_t>(a)];
      rhs(a) -= ca * bx / d;
      for (int b : touched) normal(a, b) -= ca * cross[static_cast<std::size_t>(b)] / d;
    }
    for (int a : touched) cross[static_cast<std::size_t>(a)] = 0.0;
  }

  const std::size_t rows = data_rows + 1 + 254;
  if (used_samples == 0 || rows < 256 + used_samples) {
    throw Error(Errc::underdetermined,
                "response system has " + std::to_string(rows) + " equations for " +
                    std::to_string(256 + used_samples) + " unknowns");
  }

  normal(kPinCode, kPinCode) += 1.0;
  for (int z = 1; z < 255; ++z) {
    const double sw = lambda * w[static_cast<std::size_t>(z)];
    const int idx[3] = {z - 1, z, z + 1};
    const double coef[3] = {sw, -2.0 * sw, sw};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) normal(idx[a], idx[b]) += coef[a] * coef[b];
    }
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  const auto diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(diag.minCoeff() > 1e-13 * dmax)) {
    throw Error(Errc::singular, "response normal equations are singular");
  }
  const Eigen::VectorXd g = ldlt.solve(rhs);

  std::array<double, 256> out{};
  for (int z = 0; z < 256; ++z) {
    if (!std::isfinite(g(z))) throw Error(Errc::singular, "response solution is not finite");
    out[static_cast<std::size_t>(z)] = g(z) - g(kPinCode);
  }
  for (int z = 0; z < 255; ++z) {
    if (out[static_cast<std::size_t>(z + 1)] < out[static_cast<std::size_t>(z)] - kMonotoneSlack) {
      throw Error(Errc::non_monotone, "recovered response decreases at code " +
                                          std::to_string(z) + " (channel " +
                                          std::to_string(channel) + ")");
    }
  }
  return out;
}

}  // namespace

std::vector<PixelIndex> response_sample_grid(std::size_t width, std::size_t height,
                                             std::size_t count) {
  if (count == 0 || count > width * height) {
    throw Error(Errc::underdetermined, "cannot place " + std::to_string(count) +
                                           " samples on a " + std::to_string(width) + "x" +
                                           std::to_string(height) + " raster");
  }
  const auto ideal = static_cast<std::size_t>(std::lround(std::sqrt(count / 2.0)));
  const std::size_t rows = std::clamp<std::size_t>(ideal, 1, std::min(height, count));
  std::vector<PixelIndex> out;
  out.reserve(count);
  for (std::size_t j = 0; j < rows; ++j) {
    const std::size_t in_row = (j + 1) * count / rows - j * count / rows;
    const auto row = static_cast<std::size_t>((static_cast<double>(j) + 0.5) *
                                              static_cast<double>(height) /
                                              static_cast<double>(rows));
    for (std::size_t k = 0; k < in_row; ++k) {
      const auto col = static_cast<std::size_t>((static_cast<double>(k) + 0.5) *
                                                static_cast<double>(width) /
                                                static_cast<double>(in_row));
      out.push_back({std::min(row, height - 1), std::min(col, width - 1)});
    }
  }
  return out;
}

CameraResponse solve_response(const ExposureBracket& bracket, int sample_count,
                              double smoothing_lambda) {
  if (bracket.shots.size() < 2) {
    throw Error(Errc::underdetermined, "a single exposure cannot determine the response");
  }
  validate_bracket(bracket);
  if (sample_count < 50) throw Error(Errc::invalid_argument, "sample_count must be >= 50");
  if (!(smoothing_lambda >= 0.0) || !std::isfinite(smoothing_lambda)) {
    throw Error(Errc::invalid_argument, "smoothing lambda must be non-negative");
  }
  const auto& first = bracket.shots.front();
  const auto samples =
      response_sample_grid(first.width(), first.height(), static_cast<std::size_t>(sample_count));

  CameraResponse response;
  response.smoothing_lambda = smoothing_lambda;
  for (std::size_t c = 0; c < 3; ++c) {
    response.g[c] = solve_channel(bracket, samples, c, smoothing_lambda);
  }
  return response;
}

HdrImage merge_bracket(const ExposureBracket& bracket, const CameraResponse& response) {
  return merge_bracket(bracket, response, kernels::active_kernels());
}

HdrImage merge_bracket(const ExposureBracket& bracket, const CameraResponse& response,
                       const kernels::KernelTable& k) {
  validate_bracket(bracket);
  const auto& shots = bracket.shots;
  const std::size_t width = shots.front().width();
  const std::size_t height = shots.front().height();
  validate_panorama_dims(width, height);

  const auto w = hat_table();
  std::array<double, 256 * 3> g{};
  for (std::size_t z = 0; z < 256; ++z) {
    for (std::size_t c = 0; c < 3; ++c) g[3 * z + c] = response.g[c][z];
  }

  // shot indices by ascending exposure, for the clipped-pixel fallback
  std::vector<std::size_t> by_exposure(shots.size());
  std::iota(by_exposure.begin(), by_exposure.end(), std::size_t{0});
  std::sort(by_exposure.begin(), by_exposure.end(), [&](std::size_t a, std::size_t b) {
    return shots[a].exposure_ms() < shots[b].exposure_ms();
  });
  const std::size_t longest = by_exposure.back();

  const std::size_t row_samples = width * 3;
  std::vector<double> num(row_samples * height, 0.0);
  std::vector<double> den(row_samples * height, 0.0);
  std::vector<double> out(row_samples * height);

  parallel_for(height, [&](std::size_t r0, std::size_t r1) {
    const std::size_t begin = r0 * row_samples;
    const std::size_t n = (r1 - r0) * row_samples;
    // shots are accumulated in exposure order so the result does not depend on
    // the order they were listed in
    for (std::size_t j : by_exposure) {
      const auto& shot = shots[j];
      k.merge_accumulate(shot.data().data() + begin, n, g.data(), w.data(),
                         std::log(shot.exposure_ms()), num.data() + begin, den.data() + begin);
    }
    for (std::size_t i = begin; i < begin + n; ++i) {
      const std::size_t c = i % 3;
      double log_e = 0.0;
      if (den[i] > 0.0) {
        log_e = num[i] / den[i];
      } else {
        const std::size_t* saturated = nullptr;
        for (const std::size_t& j : by_exposure) {
          if (shots[j].data()[i] == 255) {
            saturated = &j;
            break;
          }
        }
        if (saturated) {
          log_e = response.g[c][254] - std::log(shots[*saturated].exposure_ms());
        } else {
          log_e = response.g[c][1] - std::log(shots[longest].exposure_ms());
        }
      }
      out[i] = std::exp(log_e);
    }
  });

  for (double v : out) {
    if (!std::isfinite(v)) throw Error(Errc::divergence, "merged radiance is not finite");
  }
  return HdrImage(width, height, std::move(out));
}

ExposureBracket simulate_bracket(const HdrImage& hdr, std::span<const double> exposures_ms,
                                 double gamma, double noise_sigma, std::uint64_t seed,
                                 std::string location_id) {
  std::mt19937_64 rng(seed);
  ExposureBracket bracket;
  bracket.location_id = std::move(location_id);
  for (double dt : exposures_ms) {
    bracket.shots.push_back(simulate_shot(hdr, dt, gamma, noise_sigma, rng));
  }
  validate_bracket(bracket);
  return bracket;
}

}  // namespace panolux
