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

#include "panolux/losses.hpp"

#include <cmath>

#include "panolux/photometry.hpp"

namespace panolux {
namespace {

void require_same_size(const HdrImage& a, const HdrImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::mismatched_dimensions, "prediction and target differ in size");
  }
}

void check_gradient(const GradientField& g, const HdrImage& like, const char* who) {
  if (g.width != like.width() || g.height != like.height() ||
      g.data.size() != like.sample_count()) {
    throw Error(Errc::mismatched_dimensions, std::string(who) + " gradient has the wrong size");
  }
}

}  // namespace

void LossWeights::validate() const {
  if (!(lambda_tv >= 0.0) || !(lambda_p >= 0.0) || !(lambda_illuminance >= 0.0)) {
    throw Error(Errc::invalid_argument, "loss weights must be non-negative");
  }
  if (!(log_epsilon > 0.0)) throw Error(Errc::invalid_argument, "log epsilon must be positive");
}

ExposureCode encode_exposure(double exposure_ms) {
  const double lo = 0.5 * kExposureStepMs;
  const double hi = kExposureBins * kExposureStepMs + 0.5 * kExposureStepMs;
  if (!(exposure_ms >= lo && exposure_ms <= hi)) {
    throw Error(Errc::out_of_range, "exposure " + std::to_string(exposure_ms) +
                                        " ms is outside the 5..100 ms grid");
  }
  const double stop = std::floor(exposure_ms / kExposureStepMs + 0.5);
  const auto index = std::min<std::size_t>(static_cast<std::size_t>(stop) - 1, kExposureBins - 1);
  ExposureCode code;
  code.bins[index] = 1.0;
  code.index = index;
  code.stop_ms = kExposureStepMs * static_cast<double>(index + 1);
  return code;
}

LossTerm log_l2_loss(const HdrImage& pred, const HdrImage& target, double eps) {
  require_same_size(pred, target);
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "log epsilon must be positive");
  const auto p = pred.data();
  const auto t = target.data();
  const double n = static_cast<double>(p.size());
  LossTerm out{0.0, GradientField::zeros(pred.width(), pred.height())};
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::log(p[i] + eps) - std::log(t[i] + eps);
    sum += d * d;
    out.grad.data[i] = 2.0 * d / ((p[i] + eps) * n);
  }
  out.value = sum / n;
  return out;
}

LossTerm tv_loss(const HdrImage& pred) { return tv_loss(pred, kernels::active_kernels()); }

LossTerm tv_loss(const HdrImage& pred, const kernels::KernelTable& k) {
  LossTerm out{0.0, GradientField::zeros(pred.width(), pred.height())};
  const double n = static_cast<double>(pred.sample_count());
  const double total =
      k.total_variation(pred.data().data(), pred.width(), pred.height(), out.grad.data.data());
  for (double& g : out.grad.data) g /= n;
  out.value = total / n;
  return out;
}

LossTerm illuminance_loss(const HdrImage& pred, double scale, double gt_lux) {
  if (!(gt_lux > 0.0) || !std::isfinite(gt_lux)) {
    throw Error(Errc::invalid_argument, "ground-truth illuminance must be positive");
  }
  const double estimate = illuminance_of_hdr(pred, scale);
  const double residual = estimate - gt_lux;

  LossTerm out{residual * residual, GradientField::zeros(pred.width(), pred.height())};
  const auto weights = illuminance_row_weights(pred.width(), pred.height());
  const double coeff[3] = {kernels::kLumR, kernels::kLumG, kernels::kLumB};
  const std::size_t w = pred.width();
  for (std::size_t r = 0; r < pred.height() / 2; ++r) {
    const double base = 2.0 * residual * scale * kernels::kEfficacy * weights[r];
    double* row = out.grad.data.data() + r * w * 3;
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) row[3 * c + ch] = base * coeff[ch];
    }
  }
  return out;
}

TotalLoss total_loss(const HdrImage& pred, const HdrImage& target, double scale, double gt_lux,
                     const LossWeights& weights, const std::optional<PerceptualHook>& perceptual) {
  weights.validate();
  const auto& k = kernels::active_kernels();

  const LossTerm l2 = log_l2_loss(pred, target, weights.log_epsilon);
  const LossTerm tv = tv_loss(pred, k);
  const LossTerm illum = illuminance_loss(pred, scale, gt_lux);

  TotalLoss out;
  out.breakdown.log_l2 = l2.value;
  out.breakdown.tv = tv.value;
  out.breakdown.illuminance = illum.value;
  out.grad = l2.grad;
  const std::size_t n = out.grad.data.size();
  k.axpy(weights.lambda_tv, tv.grad.data.data(), out.grad.data.data(), n);
  if (perceptual && *perceptual) {
    const LossTerm p = (*perceptual)(pred, target);
    check_gradient(p.grad, pred, "perceptual");
    out.breakdown.perceptual = p.value;
    k.axpy(weights.lambda_p, p.grad.data.data(), out.grad.data.data(), n);
  }
  k.axpy(weights.lambda_illuminance, illum.grad.data.data(), out.grad.data.data(), n);

  out.value = out.breakdown.log_l2 + weights.lambda_tv * out.breakdown.tv +
              weights.lambda_p * out.breakdown.perceptual +
              weights.lambda_illuminance * out.breakdown.illuminance;
  return out;
}

}  // namespace panolux
