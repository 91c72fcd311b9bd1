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
#include "panolux/multishot.hpp"
#include "panolux/photometry.hpp"
#include "panolux/toyfit.hpp"

using namespace panolux;

namespace {

ExpansionModel true_model() {
  ExpansionModel m;
  m.log_scale = {0.2, 0.0, -0.15};
  m.gamma = {2.0, 2.2, 2.4};
  m.saturation_boost = 0.0;
  return m;
}

// LDR shots of random scenes, with targets produced by a known model.
std::vector<FitSample> self_consistent_samples(const ExpansionModel& truth, std::uint64_t seed) {
  std::vector<FitSample> out;
  const auto scenes = random_scenes(6, seed, 64, 32);
  std::mt19937_64 rng(seed);
  const double stops[] = {10.0, 25.0, 50.0};
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const HdrImage hdr = render_scene(scenes[i]).hdr;
    const LdrImage ldr = simulate_shot(hdr, stops[i % 3], 2.2, 0.0, rng);
    HdrImage target = expand(truth, ldr);
    const double lux = illuminance_of_hdr(target, 1.0);
    out.push_back({ldr, std::move(target), lux});
  }
  return out;
}

double mean_lux(const std::vector<FitSample>& samples) {
  double total = 0.0;
  for (const auto& s : samples) total += s.gt_lux;
  return total / static_cast<double>(samples.size());
}

LdrImage random_ldr(std::mt19937_64& rng, std::size_t w, std::size_t h, double dt) {
  std::vector<std::uint8_t> codes(w * h * 3);
  for (auto& z : codes) z = static_cast<std::uint8_t>(rng() % 256);
  return LdrImage(w, h, std::move(codes), dt);
}

}  // namespace

TEST_SUITE("toyfit") {

TEST_CASE("expansion examples") {
  ExpansionModel m;
  m.saturation_boost = 0.75;
  const LdrImage black(4, 2, std::vector<std::uint8_t>(24, 0), 10.0);
  const HdrImage dark = expand(m, black);
  for (double v : dark.data()) CHECK(v == 0.0);
  const LdrImage white(4, 2, std::vector<std::uint8_t>(24, 255), 1000.0);
  const HdrImage bright = expand(m, white);
  for (double v : bright.data()) CHECK(v == doctest::Approx(1.75).epsilon(1e-15));

  std::mt19937_64 rng(1);
  const LdrImage ldr = random_ldr(rng, 8, 4, 20.0);
  const HdrImage a = expand(true_model(), ldr);
  const HdrImage b = expand(true_model(), ldr.with_exposure(40.0));
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    if (ldr.data()[i] != 255) CHECK(b.data()[i] == doctest::Approx(a.data()[i] / 2).epsilon(1e-15));
  }
}

TEST_CASE("model validation") {
  ExpansionModel m;
  m.gamma[1] = 0.1;
  CHECK_THROWS_AS(m.validate(), Error);
  m = ExpansionModel{};
  m.saturation_boost = -1.0;
  CHECK_THROWS_AS(m.validate(), Error);
  m = ExpansionModel{};
  m.log_scale[0] = INFINITY;
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("property: expand gradients match central differences") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const LdrImage ldr = random_ldr(rng, 16, 8, 5.0 * static_cast<double>(1 + rng() % 20));
    GradientField up = GradientField::zeros(16, 8);
    for (double& g : up.data) g = unit(rng);
    const auto model_of = [](const std::vector<double>& p) {
      ExpansionModel m;
      for (std::size_t c = 0; c < 3; ++c) {
        m.log_scale[c] = p[c];
        m.gamma[c] = p[3 + c];
      }
      m.saturation_boost = p[6];
      return m;
    };
    std::vector<double> p{unit(rng), unit(rng), unit(rng), 1.0 + unit(rng) * 0.5 + 1.0,
                          2.0 + unit(rng) * 0.5, 2.2 + unit(rng) * 0.5, 1.0 + unit(rng) * 0.5};
    const auto f = [&](const std::vector<double>& v) {
      const HdrImage h = expand(model_of(v), ldr);
      double total = 0.0;
      for (std::size_t i = 0; i < h.sample_count(); ++i) total += up.data[i] * h.data()[i];
      return total;
    };
    const ModelGradient g = expand_backward(model_of(p), ldr, up);
    std::vector<double> analytic{g.log_scale[0], g.log_scale[1], g.log_scale[2], g.gamma[0],
                                 g.gamma[1],     g.gamma[2],     g.saturation_boost};
    const auto r = oracle::check_gradient(f, p, analytic, 1e-4, 1e-8);
    INFO("param ", r.worst_index, " analytic ", r.analytic, " numeric ", r.numeric);
    CHECK(r.ok());
  }
}

TEST_CASE("fit recovers a known model without illuminance supervision") {
  const ExpansionModel truth = true_model();
  const auto samples = self_consistent_samples(truth, 3);
  // TV pulls the optimum away from the generating model, so only the data term
  const LossWeights weights{0.0, 0.0, 0.0, 1e-6};
  const FitResult r = fit(ExpansionModel{}, samples, 1.0 / mean_lux(samples), weights, 2000, 5e-2);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(std::fabs(r.model.gamma[c] - truth.gamma[c]) <= 0.05);
  }
  REQUIRE(r.trace.size() == 2000);
  CHECK(r.trace.back().total <= r.trace.front().total);
}

TEST_CASE("fit with illuminance supervision lands within 5% of the consistent lux") {
  const ExpansionModel truth = true_model();
  auto samples = self_consistent_samples(truth, 4);
  // ground truth in units of the mean, matching the scale handed to the fit
  const double scale = 1.0 / mean_lux(samples);
  for (auto& s : samples) s.gt_lux *= scale;
  LossWeights weights;
  weights.lambda_illuminance = 1.0;
  const FitResult r = fit(ExpansionModel{}, samples, scale, weights);
  for (const auto& s : samples) {
    const double est = illuminance_of_hdr(expand(r.model, s.ldr), scale);
    CHECK(std::fabs(est - s.gt_lux) / s.gt_lux <= 0.05);
  }
}

TEST_CASE("fit preconditions and degenerate learning rates") {
  const auto samples = self_consistent_samples(true_model(), 5);
  const LossWeights weights;
  CHECK_THROWS_AS(fit(ExpansionModel{}, samples, 1.0, weights, 0), Error);
  CHECK_THROWS_AS(fit(ExpansionModel{}, samples, 1.0, weights, 10, 0.0), Error);
  CHECK_THROWS_AS(fit(ExpansionModel{}, {}, 1.0, weights, 10), Error);

  ExpansionModel init;
  init.log_scale = {0.3, -0.2, 0.1};
  init.gamma = {1.5, 2.0, 2.5};
  init.saturation_boost = 0.4;
  const FitResult r = fit(init, samples, 1.0 / mean_lux(samples), weights, 5, 1e-300);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(r.model.log_scale[c] == doctest::Approx(init.log_scale[c]).epsilon(1e-15));
    CHECK(r.model.gamma[c] == doctest::Approx(init.gamma[c]).epsilon(1e-15));
  }
  CHECK(r.model.saturation_boost == doctest::Approx(init.saturation_boost).epsilon(1e-15));
}

TEST_CASE("loss trace CSV") {
  const std::vector<TraceRow> rows{{0, 1.5, 1.0, 0.5, 0.25}, {1, 0.1, 0.0, 0.0, 0.1}};
  const std::string csv = trace_csv(rows);
  CHECK(csv.rfind("step,total,log_l2,tv,illuminance\n", 0) == 0);
  CHECK(csv.find("\n0,1.5,1,0.5,0.25\n") != std::string::npos);
  CHECK(csv.find("\n1,0.10000000000000001,0,0,0.10000000000000001\n") != std::string::npos);
}

TEST_CASE("automatic exposure keeps the brightest pixel below clipping") {
  const HdrImage hdr = HdrImage::filled(8, 4, 5.0);
  const double dt = auto_exposure_ms(hdr, 2.2);
  CHECK(5.0 * dt / 1000 <= std::pow(243.0 / 255.0, 2.2));
  CHECK((dt == 100.0 || 5.0 * (dt + 5.0) / 1000 > std::pow(243.0 / 255.0, 2.2)));
}

TEST_CASE("ablation with illuminance supervision") {
  AblationConfig config;
  config.target_miscale = 1.5;
  const auto scenes = random_scenes(10, config.seed, config.width, config.height);
  const MetricReport with = ablation_run(scenes, true, config);
  const MetricReport without = ablation_run(scenes, false, config);
  CHECK(with.acc_25 == 1.0);
  CHECK(without.acc_25 < with.acc_25);
  CHECK(with.n_locations == 5);
  CHECK(ablation_run(scenes, true, config).to_json() == with.to_json());
  CHECK_THROWS_AS(ablation_run(std::span(scenes).first(4), true, config), Error);
}

TEST_CASE("random scenes are deterministic and valid") {
  const auto a = random_scenes(9, 7, 64, 32);
  const auto b = random_scenes(9, 7, 64, 32);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].to_json() == b[i].to_json());
    CHECK_NOTHROW(a[i].validate());
    CHECK(a[i].kind == static_cast<SceneKind>(i % 3));
  }
}

}  // TEST_SUITE
