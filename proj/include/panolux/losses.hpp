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
#include <functional>
#include <optional>

#include "panolux/image.hpp"
#include "panolux/kernels.hpp"

namespace panolux {

struct LossWeights {
  double lambda_tv = 0.1;
  double lambda_p = 0.001;
  double lambda_illuminance = 1.0;
  double log_epsilon = 1e-6;

  void validate() const;
};

/// A scalar loss value with its gradient with respect to the predicted image.
struct LossTerm {
  double value = 0.0;
  GradientField grad;
};

inline constexpr std::size_t kExposureBins = 20;
inline constexpr double kExposureStepMs = 5.0;

struct ExposureCode {
  std::array<double, kExposureBins> bins{};
  std::size_t index = 0;
  double stop_ms = 0.0;
};

/// One-hot code on the 5..100 ms grid in 5 ms steps, nearest stop with ties
/// rounding up. Accepts [2.5, 102.5] ms; 102.5 maps to the 100 ms stop.
ExposureCode encode_exposure(double exposure_ms);

/// Mean of (ln(pred + eps) - ln(target + eps))^2 over all samples.
LossTerm log_l2_loss(const HdrImage& pred, const HdrImage& target, double eps);

/// Anisotropic L1 total variation over both axes and all channels, divided by
/// the sample count. Subgradient 0 at ties.
LossTerm tv_loss(const HdrImage& pred);
LossTerm tv_loss(const HdrImage& pred, const kernels::KernelTable& k);

/// (I_hat - gt_lux)^2 with I_hat = illuminance_of_hdr(pred, scale). Lower
/// hemisphere gradient entries are exactly zero.
LossTerm illuminance_loss(const HdrImage& pred, double scale, double gt_lux);

/// Stand-in for a feature-space perceptual loss: (pred, target) -> value and gradient.
using PerceptualHook = std::function<LossTerm(const HdrImage&, const HdrImage&)>;

struct LossBreakdown {
  double log_l2 = 0.0;
  double tv = 0.0;
  double perceptual = 0.0;
  double illuminance = 0.0;
};

struct TotalLoss {
  double value = 0.0;
  GradientField grad;
  LossBreakdown breakdown;  // unweighted term values
};

/// log_l2 + lambda_tv tv + lambda_p perceptual + lambda illuminance. Without a
/// hook the perceptual term is zero.
TotalLoss total_loss(const HdrImage& pred, const HdrImage& target, double scale, double gt_lux,
                     const LossWeights& weights,
                     const std::optional<PerceptualHook>& perceptual = std::nullopt);

}  // namespace panolux
