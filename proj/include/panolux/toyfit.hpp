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
#include <span>
#include <string>
#include <vector>

#include "panolux/image.hpp"
#include "panolux/losses.hpp"
#include "panolux/metrics.hpp"
#include "panolux/synthscene.hpp"

namespace panolux {

/// Global per-channel LDR -> HDR expansion:
///   H = exp(log_scale) (Z / 255)^gamma / (dt / 1000) + saturation_boost [Z = 255]
struct ExpansionModel {
  std::array<double, 3> log_scale{0.0, 0.0, 0.0};
  std::array<double, 3> gamma{1.0, 1.0, 1.0};
  double saturation_boost = 0.0;

  static constexpr double kMinGamma = 0.2;
  static constexpr double kMaxGamma = 10.0;

  void validate() const;
};

HdrImage expand(const ExpansionModel& model, const LdrImage& ldr);

/// Derivatives of a scalar loss with respect to the model parameters.
struct ModelGradient {
  std::array<double, 3> log_scale{};
  std::array<double, 3> gamma{};
  double saturation_boost = 0.0;
};

/// Pulls dLoss/dH (one entry per HDR sample) back through expand().
ModelGradient expand_backward(const ExpansionModel& model, const LdrImage& ldr,
                              const GradientField& upstream);

struct FitSample {
  LdrImage ldr;
  HdrImage target;
  double gt_lux;
};

struct TraceRow {
  std::size_t step;
  double total;
  double log_l2;
  double tv;
  double illuminance;
};

struct FitResult {
  ExpansionModel model;
  std::vector<TraceRow> trace;  // loss at the parameters entering each step
};

inline constexpr std::size_t kDefaultFitSteps = 2000;
inline constexpr double kDefaultLearningRate = 1e-2;

/// Plain gradient descent on the mean total loss over `samples`, in
/// (log_scale, log_gamma, saturation_boost) coordinates. Gamma is kept inside
/// [kMinGamma, kMaxGamma] and the boost non-negative. Throws divergence, naming
/// the step, if the loss stops being finite.
FitResult fit(const ExpansionModel& init, std::span<const FitSample> samples, double scale,
              const LossWeights& weights, std::size_t steps = kDefaultFitSteps,
              double lr = kDefaultLearningRate);

/// "step,total,log_l2,tv,illuminance" followed by one line per trace row.
std::string trace_csv(std::span<const TraceRow> trace);

struct AblationConfig {
  std::size_t width = 64;
  std::size_t height = 32;
  double camera_gamma = 2.2;
  double noise_sigma = 0.5;
  /// Multiplier applied to the training targets, mimicking a miscalibrated
  /// multi-shot "ground truth".
  double target_miscale = 1.5;
  std::vector<double> bracket_ms{10.0, 25.0, 50.0, 100.0};
  std::size_t steps = 1000;
  double lr = kDefaultLearningRate;
  LossWeights weights{};
  /// Training illuminances are expressed in units of mean(gt) / illuminance_units
  /// so the squared lux residual stays O(1) for a fixed learning rate.
  double illuminance_units = 3.0;
  std::uint64_t seed = 0;
};

/// Random equal-luminance-weight scenes cycling through the three kinds.
std::vector<SceneSpec> random_scenes(std::size_t count, std::uint64_t seed, std::size_t width,
                                     std::size_t height);

/// Longest stop of the 5..100 ms grid that keeps the brightest sample below
/// code 243 under the simulated camera; 5 ms when none does.
double auto_exposure_ms(const HdrImage& hdr, double camera_gamma);

/// Fits one model on the even-indexed scenes (all bracket shots) and reports
/// illuminance accuracy of the auto-exposed odd-indexed scenes, plus the
/// consistency of each held-out bracket's expansions. Without illuminance the
/// loss weight lambda is forced to zero.
MetricReport ablation_run(std::span<const SceneSpec> scenes, bool with_illuminance,
                          const AblationConfig& config = {});

struct ConsistencyResult {
  double joint;     // one exposure-aware model fitted on every shot
  double per_shot;  // one model per bracket position, fitted independently
};

/// Mean-std consistency of held-out bracket expansions under the two fitting
/// regimes, averaged over the odd-indexed scenes.
ConsistencyResult consistency_study(std::span<const SceneSpec> scenes,
                                    const AblationConfig& config = {});

}  // namespace panolux
