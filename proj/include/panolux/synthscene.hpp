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
#include <cstdint>
#include <string>
#include <string_view>

#include "panolux/image.hpp"

namespace panolux {

enum class SceneKind { uniform_sky, cosine_sky, disk_light };

std::string_view scene_kind_name(SceneKind kind) noexcept;
SceneKind parse_scene_kind(std::string_view name);

/// Synthetic panorama with a closed-form illuminance.
///  uniform-sky: L = sky_radiance everywhere.
///  cosine-sky:  L = sky_radiance cos(theta) above the horizon, ambient below.
///  disk-light:  L = disk_radiance inside a cap of angular radius disk_radius
///               around (disk_theta, disk_phi), ambient elsewhere. The cap must
///               lie entirely above the horizon. Pixels straddling the cap
///               edge carry their solid-angle weighted coverage.
/// Channel c carries radiance * rgb[c].
struct SceneSpec {
  SceneKind kind = SceneKind::uniform_sky;
  double sky_radiance = 1.0;
  double disk_theta = 0.0;
  double disk_phi = 0.0;
  double disk_radius = 0.5;
  double disk_radiance = 10.0;
  double ambient_radiance = 0.0;
  std::array<double, 3> rgb{1.0, 1.0, 1.0};
  std::size_t width = 512;
  std::size_t height = 256;
  std::uint64_t seed = 0;

  void validate() const;
  static SceneSpec from_json(std::string_view text);
  std::string to_json() const;
};

struct RenderedScene {
  HdrImage hdr;
  double analytic_lux;
};

RenderedScene render_scene(const SceneSpec& spec);

/// Closed-form illuminance of the continuous scene.
double analytic_illuminance(const SceneSpec& spec);

}  // namespace panolux
