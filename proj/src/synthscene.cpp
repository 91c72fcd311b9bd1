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

#include "panolux/synthscene.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "panolux/kernels.hpp"

namespace panolux {
namespace {

// Sub-grid resolution for pixels that straddle the disk edge.
constexpr int kEdgeSubsamples = 16;

double channel_weight(const std::array<double, 3>& rgb) {
  return kernels::kLumR * rgb[0] + kernels::kLumG * rgb[1] + kernels::kLumB * rgb[2];
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view scene_kind_name(SceneKind kind) noexcept {
  switch (kind) {
    case SceneKind::uniform_sky: return "uniform-sky";
    case SceneKind::cosine_sky: return "cosine-sky";
    case SceneKind::disk_light: return "disk-light";
  }
  return "unknown";
}

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "uniform-sky") return SceneKind::uniform_sky;
  if (name == "cosine-sky") return SceneKind::cosine_sky;
  if (name == "disk-light") return SceneKind::disk_light;
  throw Error(Errc::invalid_argument, "unknown scene kind '" + std::string(name) + "'");
}

void SceneSpec::validate() const {
  validate_panorama_dims(width, height);
  if (!finite_nonneg(sky_radiance) || !finite_nonneg(disk_radiance) ||
      !finite_nonneg(ambient_radiance)) {
    throw Error(Errc::invalid_argument, "scene radiances must be finite and non-negative");
  }
  for (double c : rgb) {
    if (!finite_nonneg(c)) throw Error(Errc::invalid_argument, "rgb multipliers must be >= 0");
  }
  if (kind == SceneKind::disk_light) {
    if (!(disk_radius > 0.0 && disk_radius < kPi / 2)) {
      throw Error(Errc::invalid_argument, "disk radius must lie in (0, pi/2)");
    }
    if (!(disk_theta >= 0.0) || !(disk_theta + disk_radius <= kPi / 2 + 1e-12)) {
      throw Error(Errc::invalid_argument, "disk must lie entirely above the horizon");
    }
    if (!std::isfinite(disk_phi)) throw Error(Errc::invalid_argument, "disk azimuth not finite");
  }
}

SceneSpec SceneSpec::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("scene JSON: ") + e.what());
  }
  SceneSpec s;
  try {
    s.kind = parse_scene_kind(j.at("kind").get<std::string>());
    s.sky_radiance = j.value("sky_radiance", s.sky_radiance);
    s.disk_theta = j.value("disk_theta", s.disk_theta);
    s.disk_phi = j.value("disk_phi", s.disk_phi);
    s.disk_radius = j.value("disk_radius", s.disk_radius);
    s.disk_radiance = j.value("disk_radiance", s.disk_radiance);
    s.ambient_radiance = j.value("ambient_radiance", s.ambient_radiance);
    s.rgb = j.value("rgb", s.rgb);
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("scene JSON: ") + e.what());
  }
  s.validate();
  return s;
}

std::string SceneSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = scene_kind_name(kind);
  j["sky_radiance"] = sky_radiance;
  j["disk_theta"] = disk_theta;
  j["disk_phi"] = disk_phi;
  j["disk_radius"] = disk_radius;
  j["disk_radiance"] = disk_radiance;
  j["ambient_radiance"] = ambient_radiance;
  j["rgb"] = rgb;
  j["width"] = width;
  j["height"] = height;
  j["seed"] = seed;
  return j.dump();
}

double analytic_illuminance(const SceneSpec& spec) {
  spec.validate();
  const double w = kernels::kEfficacy * channel_weight(spec.rgb);
  switch (spec.kind) {
    case SceneKind::uniform_sky:
      return w * kPi * spec.sky_radiance;
    case SceneKind::cosine_sky:
      return w * (2.0 * kPi / 3.0) * spec.sky_radiance;
    case SceneKind::disk_light: {
      // projected solid angle of a cap fully above the horizon: pi sin^2(a) cos(theta0)
      const double s = std::sin(spec.disk_radius);
      const double cap = kPi * s * s * std::cos(spec.disk_theta);
      return w * (spec.ambient_radiance * (kPi - cap) + spec.disk_radiance * cap);
    }
  }
  return 0.0;
}

RenderedScene render_scene(const SceneSpec& spec) {
  spec.validate();
  const std::size_t width = spec.width;
  const std::size_t height = spec.height;
  std::vector<double> rgb(width * height * 3);

  const double ct0 = std::cos(spec.disk_theta);
  const double st0 = std::sin(spec.disk_theta);
  const double cos_radius = std::cos(spec.disk_radius);
  const double dtheta = kPi / static_cast<double>(height);
  const double dphi = 2 * kPi / static_cast<double>(width);
  const double half_diagonal = 0.5 * std::hypot(dtheta, dphi);
  auto inside = [&](double theta, double phi) {
    return std::cos(theta) * ct0 + std::sin(theta) * st0 * std::cos(phi - spec.disk_phi) >=
           cos_radius;
  };
  // Solid-angle weighted fraction of a pixel inside the cap, on a sub-grid.
  auto coverage = [&](const Direction& d) {
    double in = 0.0;
    double total = 0.0;
    for (int i = 0; i < kEdgeSubsamples; ++i) {
      const double theta = d.theta + dtheta * ((i + 0.5) / kEdgeSubsamples - 0.5);
      const double w = std::sin(theta);
      for (int j = 0; j < kEdgeSubsamples; ++j) {
        const double phi = d.phi + dphi * ((j + 0.5) / kEdgeSubsamples - 0.5);
        total += w;
        if (inside(theta, phi)) in += w;
      }
    }
    return in / total;
  };

  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const Direction d = pixel_direction(r, c, width, height);
      const bool upper = d.theta < kPi / 2;
      double radiance = 0.0;
      switch (spec.kind) {
        case SceneKind::uniform_sky:
          radiance = spec.sky_radiance;
          break;
        case SceneKind::cosine_sky:
          radiance = upper ? spec.sky_radiance * std::cos(d.theta) : spec.ambient_radiance;
          break;
        case SceneKind::disk_light: {
          const double cos_dist = std::cos(d.theta) * ct0 +
                                  std::sin(d.theta) * st0 * std::cos(d.phi - spec.disk_phi);
          const double dist = std::acos(std::clamp(cos_dist, -1.0, 1.0));
          double f = cos_dist >= cos_radius ? 1.0 : 0.0;
          if (std::fabs(dist - spec.disk_radius) <= half_diagonal) f = coverage(d);
          radiance = spec.ambient_radiance + f * (spec.disk_radiance - spec.ambient_radiance);
          break;
        }
      }
      double* px = rgb.data() + (r * width + c) * 3;
      for (std::size_t ch = 0; ch < 3; ++ch) px[ch] = radiance * spec.rgb[ch];
    }
  }
  return {HdrImage(width, height, std::move(rgb)), analytic_illuminance(spec)};
}

}  // namespace panolux
