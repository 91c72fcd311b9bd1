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

#include "panolux/toyfit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "panolux/kernels.hpp"
#include "panolux/multishot.hpp"
#include "panolux/photometry.hpp"

namespace panolux {
namespace {

// (z / 255)^gamma for every code of one channel.
std::array<double, 256> power_table(double gamma) {
  std::array<double, 256> t{};
  for (int z = 0; z < 256; ++z) t[static_cast<std::size_t>(z)] = std::pow(z / 255.0, gamma);
  return t;
}

const std::array<double, 256>& log_code_table() {
  static const auto table = [] {
    std::array<double, 256> t{};
    for (int z = 1; z < 256; ++z) t[static_cast<std::size_t>(z)] = std::log(z / 255.0);
    return t;  // code 0 contributes nothing: its base value is 0
  }();
  return table;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

std::vector<LdrImage> simulate_shots(const SceneSpec& spec, const HdrImage& hdr,
                                     std::span<const double> exposures,
                                     const AblationConfig& config) {
  std::mt19937_64 rng(mix_seed(spec.seed, config.seed));
  std::vector<LdrImage> shots;
  shots.reserve(exposures.size());
  for (double dt : exposures) {
    shots.push_back(simulate_shot(hdr, dt, config.camera_gamma, config.noise_sigma, rng));
  }
  return shots;
}

HdrImage scaled(const HdrImage& hdr, double factor) {
  auto v = hdr.to_vector();
  for (double& x : v) x *= factor;
  return HdrImage(hdr.width(), hdr.height(), std::move(v));
}

SceneSpec at_resolution(SceneSpec spec, const AblationConfig& config) {
  spec.width = config.width;
  spec.height = config.height;
  return spec;
}

struct Prepared {
  std::vector<FitSample> train;  // every bracket shot of every training scene
  std::vector<std::vector<FitSample>> train_by_shot;
  double illuminance_unit = 1.0;
  struct HeldOut {
    LdrImage auto_shot;
    std::vector<LdrImage> bracket;
    double analytic_lux;
  };
  std::vector<HeldOut> held_out;
};

Prepared prepare(std::span<const SceneSpec> scenes, const AblationConfig& config) {
  if (scenes.size() < 5) throw Error(Errc::invalid_argument, "ablation needs at least 5 scenes");
  if (config.bracket_ms.empty()) throw Error(Errc::invalid_argument, "empty training bracket");
  if (!(config.target_miscale > 0.0) || !(config.illuminance_units > 0.0)) {
    throw Error(Errc::invalid_argument, "miscale and illuminance units must be positive");
  }
  Prepared p;
  p.train_by_shot.resize(config.bracket_ms.size());
  std::vector<std::pair<std::vector<LdrImage>, RenderedScene>> train_raw;
  double gt_sum = 0.0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const SceneSpec spec = at_resolution(scenes[i], config);
    RenderedScene scene = render_scene(spec);
    if (i % 2 == 0) {
      auto shots = simulate_shots(spec, scene.hdr, config.bracket_ms, config);
      gt_sum += scene.analytic_lux;
      train_raw.emplace_back(std::move(shots), std::move(scene));
    } else {
      const double dt = auto_exposure_ms(scene.hdr, config.camera_gamma);
      std::vector<double> exposures(config.bracket_ms);
      exposures.push_back(dt);
      auto shots = simulate_shots(spec, scene.hdr, exposures, config);
      LdrImage auto_shot = shots.back();
      shots.pop_back();
      p.held_out.push_back({std::move(auto_shot), std::move(shots), scene.analytic_lux});
    }
  }
  p.illuminance_unit = gt_sum / static_cast<double>(train_raw.size()) / config.illuminance_units;
  for (auto& [shots, scene] : train_raw) {
    const HdrImage target = scaled(scene.hdr, config.target_miscale);
    for (std::size_t j = 0; j < shots.size(); ++j) {
      FitSample s{shots[j], target, scene.analytic_lux / p.illuminance_unit};
      p.train.push_back(s);
      p.train_by_shot[j].push_back(std::move(s));
    }
  }
  return p;
}

}  // namespace

void ExpansionModel::validate() const {
  for (std::size_t c = 0; c < 3; ++c) {
    if (!std::isfinite(log_scale[c]) || !(gamma[c] >= kMinGamma && gamma[c] <= kMaxGamma)) {
      throw Error(Errc::invalid_argument, "expansion model parameters out of range");
    }
  }
  if (!std::isfinite(saturation_boost) || saturation_boost < 0.0) {
    throw Error(Errc::invalid_argument, "saturation boost must be finite and >= 0");
  }
}

HdrImage expand(const ExpansionModel& model, const LdrImage& ldr) {
  model.validate();
  const double inv_dt = 1000.0 / ldr.exposure_ms();
  std::array<std::array<double, 256>, 3> lut{};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto pw = power_table(model.gamma[c]);
    const double k = std::exp(model.log_scale[c]) * inv_dt;
    for (std::size_t z = 0; z < 256; ++z) lut[c][z] = k * pw[z];
    lut[c][255] += model.saturation_boost;
  }
  const auto codes = ldr.data();
  std::vector<double> out(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) out[i] = lut[i % 3][codes[i]];
  return HdrImage(ldr.width(), ldr.height(), std::move(out));
}

ModelGradient expand_backward(const ExpansionModel& model, const LdrImage& ldr,
                              const GradientField& upstream) {
  model.validate();
  const auto codes = ldr.data();
  if (upstream.width != ldr.width() || upstream.height != ldr.height() ||
      upstream.data.size() != codes.size()) {
    throw Error(Errc::mismatched_dimensions, "upstream gradient does not match the LDR");
  }
  const double inv_dt = 1000.0 / ldr.exposure_ms();
  std::array<std::array<double, 256>, 3> base_lut{};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto pw = power_table(model.gamma[c]);
    const double k = std::exp(model.log_scale[c]) * inv_dt;
    for (std::size_t z = 0; z < 256; ++z) base_lut[c][z] = k * pw[z];
  }
  const auto& log_code = log_code_table();

  std::vector<double> base(codes.size());
  std::vector<double> base_log(codes.size());
  double boost = 0.0;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::uint8_t z = codes[i];
    base[i] = base_lut[i % 3][z];
    base_log[i] = base[i] * log_code[z];
    if (z == 255) boost += upstream.data[i];
  }
  const auto& k = kernels::active_kernels();
  ModelGradient g;
  k.channel_dot(upstream.data.data(), base.data(), codes.size(), g.log_scale.data());
  k.channel_dot(upstream.data.data(), base_log.data(), codes.size(), g.gamma.data());
  g.saturation_boost = boost;
  return g;
}

FitResult fit(const ExpansionModel& init, std::span<const FitSample> samples, double scale,
              const LossWeights& weights, std::size_t steps, double lr) {
  if (steps < 1) throw Error(Errc::invalid_argument, "fit needs at least one step");
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw Error(Errc::invalid_argument, "learning rate must be positive");
  }
  if (samples.empty()) throw Error(Errc::invalid_argument, "fit needs at least one sample");
  init.validate();
  weights.validate();

  const double log_gamma_lo = std::log(ExpansionModel::kMinGamma);
  const double log_gamma_hi = std::log(ExpansionModel::kMaxGamma);
  std::array<double, 3> log_gamma{};
  for (std::size_t c = 0; c < 3; ++c) log_gamma[c] = std::log(init.gamma[c]);

  FitResult result{init, {}};
  result.trace.reserve(steps);
  ExpansionModel& model = result.model;
  const double inv_n = 1.0 / static_cast<double>(samples.size());

  for (std::size_t step = 0; step < steps; ++step) {
    TraceRow row{step, 0.0, 0.0, 0.0, 0.0};
    ModelGradient grad;
    for (const FitSample& s : samples) {
      const HdrImage pred = expand(model, s.ldr);
      const TotalLoss loss = total_loss(pred, s.target, scale, s.gt_lux, weights);
      row.total += loss.value * inv_n;
      row.log_l2 += loss.breakdown.log_l2 * inv_n;
      row.tv += loss.breakdown.tv * inv_n;
      row.illuminance += loss.breakdown.illuminance * inv_n;
      const ModelGradient g = expand_backward(model, s.ldr, loss.grad);
      for (std::size_t c = 0; c < 3; ++c) {
        grad.log_scale[c] += g.log_scale[c] * inv_n;
        grad.gamma[c] += g.gamma[c] * inv_n;
      }
      grad.saturation_boost += g.saturation_boost * inv_n;
    }
    bool finite = std::isfinite(row.total) && std::isfinite(grad.saturation_boost);
    for (std::size_t c = 0; c < 3; ++c) {
      finite = finite && std::isfinite(grad.log_scale[c]) && std::isfinite(grad.gamma[c]);
    }
    if (!finite) {
      throw Error(Errc::divergence, "fit diverged at step " + std::to_string(step));
    }
    result.trace.push_back(row);

    for (std::size_t c = 0; c < 3; ++c) {
      model.log_scale[c] -= lr * grad.log_scale[c];
      // d/d(log gamma) = gamma d/d(gamma)
      log_gamma[c] = std::clamp(log_gamma[c] - lr * model.gamma[c] * grad.gamma[c],
                                log_gamma_lo, log_gamma_hi);
      model.gamma[c] = std::clamp(std::exp(log_gamma[c]), ExpansionModel::kMinGamma,
                                  ExpansionModel::kMaxGamma);
    }
    model.saturation_boost = std::max(0.0, model.saturation_boost - lr * grad.saturation_boost);
    for (std::size_t c = 0; c < 3; ++c) {
      if (!std::isfinite(model.log_scale[c])) {
        throw Error(Errc::divergence, "fit diverged at step " + std::to_string(step));
      }
    }
  }
  return result;
}

std::string trace_csv(std::span<const TraceRow> trace) {
  std::ostringstream os;
  os.precision(17);
  os << "step,total,log_l2,tv,illuminance\n";
  for (const auto& r : trace) {
    os << r.step << ',' << r.total << ',' << r.log_l2 << ',' << r.tv << ',' << r.illuminance
       << '\n';
  }
  return os.str();
}

std::vector<SceneSpec> random_scenes(std::size_t count, std::uint64_t seed, std::size_t width,
                                     std::size_t height) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  };
  std::vector<SceneSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SceneSpec s;
    s.kind = static_cast<SceneKind>(i % 3);
    s.width = width;
    s.height = height;
    s.seed = rng();
    s.rgb = {uniform(0.85, 1.15), 1.0, uniform(0.85, 1.15)};
    switch (s.kind) {
      case SceneKind::uniform_sky:
        s.sky_radiance = log_uniform(0.5, 3.0);
        break;
      case SceneKind::cosine_sky:
        s.sky_radiance = log_uniform(1.0, 5.0);
        s.ambient_radiance = uniform(0.1, 0.5);
        break;
      case SceneKind::disk_light:
        s.disk_radius = uniform(0.25, 0.5);
        s.disk_theta = uniform(0.0, kPi / 2 - s.disk_radius);
        s.disk_phi = uniform(0.0, 2 * kPi);
        s.disk_radiance = log_uniform(5.0, 30.0);
        s.ambient_radiance = uniform(0.3, 1.5);
        break;
    }
    out.push_back(s);
  }
  return out;
}

double auto_exposure_ms(const HdrImage& hdr, double camera_gamma) {
  const auto data = hdr.data();
  const double peak = data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
  const double limit = std::pow(243.0 / 255.0, camera_gamma);
  for (int stop = static_cast<int>(kExposureBins); stop >= 1; --stop) {
    const double dt = kExposureStepMs * stop;
    if (peak * dt / 1000.0 <= limit) return dt;
  }
  return kExposureStepMs;
}

MetricReport ablation_run(std::span<const SceneSpec> scenes, bool with_illuminance,
                          const AblationConfig& config) {
  const Prepared data = prepare(scenes, config);
  LossWeights weights = config.weights;
  if (!with_illuminance) weights.lambda_illuminance = 0.0;

  const FitResult fitted =
      fit(ExpansionModel{}, data.train, 1.0 / data.illuminance_unit, weights, config.steps,
          config.lr);

  std::vector<LuxPair> pairs;
  double consistency = 0.0;
  for (const auto& h : data.held_out) {
    const HdrImage pred = expand(fitted.model, h.auto_shot);
    pairs.push_back({illuminance_of_hdr(pred, 1.0), h.analytic_lux});
    if (h.bracket.size() >= 2) {
      std::vector<HdrImage> stack;
      for (const auto& shot : h.bracket) stack.push_back(expand(fitted.model, shot));
      consistency += mean_std_consistency(stack);
    }
  }
  MetricReport report = make_report(pairs);
  if (config.bracket_ms.size() >= 2) {
    report.mean_std = consistency / static_cast<double>(data.held_out.size());
  }
  return report;
}

ConsistencyResult consistency_study(std::span<const SceneSpec> scenes,
                                    const AblationConfig& config) {
  if (config.bracket_ms.size() < 2) {
    throw Error(Errc::invalid_argument, "consistency needs a bracket of at least 2 shots");
  }
  const Prepared data = prepare(scenes, config);
  const double scale = 1.0 / data.illuminance_unit;

  const ExpansionModel joint =
      fit(ExpansionModel{}, data.train, scale, config.weights, config.steps, config.lr).model;
  std::vector<ExpansionModel> per_shot;
  for (const auto& samples : data.train_by_shot) {
    per_shot.push_back(
        fit(ExpansionModel{}, samples, scale, config.weights, config.steps, config.lr).model);
  }

  ConsistencyResult out{0.0, 0.0};
  for (const auto& h : data.held_out) {
    std::vector<HdrImage> joint_stack;
    std::vector<HdrImage> shot_stack;
    for (std::size_t j = 0; j < h.bracket.size(); ++j) {
      joint_stack.push_back(expand(joint, h.bracket[j]));
      shot_stack.push_back(expand(per_shot[j], h.bracket[j]));
    }
    out.joint += mean_std_consistency(joint_stack);
    out.per_shot += mean_std_consistency(shot_stack);
  }
  out.joint /= static_cast<double>(data.held_out.size());
  out.per_shot /= static_cast<double>(data.held_out.size());
  return out;
}

}  // namespace panolux
