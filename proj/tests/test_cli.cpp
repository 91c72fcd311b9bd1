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

#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "panolux/ldr_io.hpp"
#include "panolux/multishot.hpp"
#include "panolux/rgbe.hpp"
#include "panolux/synthscene.hpp"

using namespace panolux;
using nlohmann::json;

namespace {

json stdout_json(const fixture::CliResult& r) {
  INFO("stderr: ", r.err);
  REQUIRE(r.code == cli::kExitOk);
  return json::parse(r.out);
}

std::filesystem::path write_hdr(const fixture::TempDir& dir, const std::string& name,
                                const HdrImage& img) {
  const auto path = dir / name;
  write_file(path, write_rgbe(img));
  return path;
}

// A scene brought into the camera's range with a ramp floor for response recovery.
std::filesystem::path bracket_of(const fixture::TempDir& dir, const SceneSpec& spec,
                                 const std::string& stem) {
  const RenderedScene scene = render_scene(spec);
  const HdrImage hdr = fixture::with_ramp_floor(scene.hdr, 0.25, 100.0);
  const auto bracket = simulate_bracket(hdr, fixture::twenty_stops(), 2.2, 0.0, 1, stem);
  return fixture::write_bracket(dir, bracket, stem, scene.analytic_lux);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with the input code") {
  CHECK(fixture::run_cli({}).code == cli::kExitInput);
  CHECK(fixture::run_cli({"transmogrify"}).code == cli::kExitInput);
  CHECK(fixture::run_cli({"illuminance"}).code == cli::kExitInput);
  CHECK(fixture::run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("illuminance of an all-ones panorama") {
  fixture::TempDir dir;
  const auto path = write_hdr(dir, "ones.hdr", HdrImage::filled(512, 256, 1.0));
  const double one = stdout_json(fixture::run_cli({"illuminance", "--hdr", path.string()}))["illuminance_lux"];
  CHECK(std::fabs(one - 179.0 * oracle::kPi) / (179.0 * oracle::kPi) <= 0.01);
  const double two =
      stdout_json(fixture::run_cli({"illuminance", "--hdr", path.string(), "--scale", "2"}))["illuminance_lux"];
  CHECK(two == 2.0 * one);
}

TEST_CASE("corrupt and missing inputs exit with the input code") {
  fixture::TempDir dir;
  fixture::write_text(dir / "bad.hdr", "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y 2 +X 4\n\x01");
  const auto bad = fixture::run_cli({"illuminance", "--hdr", (dir / "bad.hdr").string()});
  CHECK(bad.code == cli::kExitInput);
  CHECK(bad.err.find("truncated") != std::string::npos);

  const auto missing = (dir / "nowhere.hdr").string();
  const auto r = fixture::run_cli({"illuminance", "--hdr", missing});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find(missing) != std::string::npos);
}

TEST_CASE("merge reports illuminance and names missing shots") {
  fixture::TempDir dir;
  const HdrImage hdr = fixture::with_ramp_floor(HdrImage::filled(64, 32, 3.0), 0.25, 100.0);
  const auto bracket = simulate_bracket(hdr, std::vector<double>{10.0, 30.0, 90.0}, 2.2, 0.0, 2, "shop");
  const auto manifest = fixture::write_bracket(dir, bracket, "shop");
  const auto out = dir / "shop.hdr";
  const json j = stdout_json(fixture::run_cli({"merge", "--manifest", manifest.string(), "--out", out.string()}));
  CHECK(j.contains("illuminance_lux"));
  CHECK(j["shots"] == 3);
  CHECK(j["location_id"] == "shop");
  CHECK(read_rgbe(read_file(out)).width() == 64);

  std::filesystem::remove(dir / "shop_1.ppm");
  const auto r = fixture::run_cli({"merge", "--manifest", manifest.string(), "--out", out.string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("shop_1.ppm") != std::string::npos);
}

TEST_CASE("numerical failures exit with their own code") {
  fixture::TempDir dir;
  const auto bracket = simulate_bracket(HdrImage::filled(4, 2, 3.0), std::vector<double>{10.0, 30.0}, 2.2, 0.0, 2, "tiny");
  const auto manifest = fixture::write_bracket(dir, bracket, "tiny");
  const auto r = fixture::run_cli({"merge", "--manifest", manifest.string(), "--out", (dir / "t.hdr").string(),
                                   "--samples", "1000"});
  CHECK(r.code == cli::kExitNumerical);
}

TEST_CASE("calibrated merge lands within 5% of the analytic illuminance") {
  fixture::TempDir dir;
  SceneSpec disk;
  disk.kind = SceneKind::disk_light;
  disk.disk_theta = 0.5;
  disk.disk_radius = 0.3;
  disk.disk_radiance = 40.0;
  disk.ambient_radiance = 3.0;
  disk.width = 256;
  disk.height = 128;
  SceneSpec cosine;
  cosine.kind = SceneKind::cosine_sky;
  cosine.sky_radiance = 20.0;
  cosine.width = 256;
  cosine.height = 128;

  const auto merge = [&](const std::filesystem::path& manifest, const std::string& scale) {
    return stdout_json(fixture::run_cli({"merge", "--manifest", manifest.string(), "--out",
                                         (dir / "out.hdr").string(), "--samples", "1000", "--scale", scale}));
  };
  // the merged radiance has an arbitrary gauge; one calibration scene fixes it
  const json calib = merge(bracket_of(dir, disk, "disk"), "1");
  const double scale = calib["gt_lux"].get<double>() / calib["illuminance_lux"].get<double>();
  const json j = merge(bracket_of(dir, cosine, "cosine"), json(scale).dump());
  const double gt = j["gt_lux"];
  CHECK(std::fabs(j["illuminance_lux"].get<double>() - gt) / gt <= 0.05);
}

TEST_CASE("calibrate") {
  fixture::TempDir dir;
  fixture::write_text(dir / "pairs.csv", "estimated_lux,true_lux\n1,2\n2,4\n");
  const json j = stdout_json(fixture::run_cli({"calibrate", "--pairs", (dir / "pairs.csv").string()}));
  CHECK(j["scale"] == 2.0);
  CHECK(j["n_pairs"] == 2);

  std::string injected = "estimated_lux,true_lux\n";
  for (int i = 1; i <= 40; ++i) {
    const double est = 37.0 * i;
    injected += json(est).dump() + "," + json(1.4514 * est).dump() + "\n";
  }
  fixture::write_text(dir / "store.csv", injected);
  const json s = stdout_json(fixture::run_cli({"calibrate", "--pairs", (dir / "store.csv").string()}));
  CHECK(std::fabs(s["scale"].get<double>() - 1.4514) <= 1e-6);

  fixture::write_text(dir / "empty.csv", "");
  CHECK(fixture::run_cli({"calibrate", "--pairs", (dir / "empty.csv").string()}).code == cli::kExitInput);
  fixture::write_text(dir / "header.csv", "estimated_lux,true_lux\n");
  CHECK(fixture::run_cli({"calibrate", "--pairs", (dir / "header.csv").string()}).code == cli::kExitInput);
  fixture::write_text(dir / "junk.csv", "estimated_lux,true_lux\n1,two\n");
  const auto junk = fixture::run_cli({"calibrate", "--pairs", (dir / "junk.csv").string()});
  CHECK(junk.code == cli::kExitInput);
  CHECK(junk.err.find("2") != std::string::npos);
}

TEST_CASE("metrics join predictions to ground truth by location") {
  fixture::TempDir dir;
  fixture::write_text(dir / "pred.csv", "location_id,pred_lux\nb,400\na,100\n");
  fixture::write_text(dir / "gt.csv", "location_id,gt_lux\na,100\nb,400\n");
  const json j = stdout_json(fixture::run_cli(
      {"metrics", "--pred", (dir / "pred.csv").string(), "--gt", (dir / "gt.csv").string()}));
  CHECK(j["acc_25"] == 1.0);
  CHECK(j["acc_10"] == 1.0);
  CHECK(j["n_locations"] == 2);
  CHECK(j["mean_std"].is_null());

  const auto a = write_hdr(dir, "a.hdr", HdrImage::filled(8, 4, 1.0));
  const auto b = write_hdr(dir, "b.hdr", HdrImage::filled(8, 4, std::exp(2.0)));
  const json k = stdout_json(fixture::run_cli({"metrics", "--pred", (dir / "pred.csv").string(), "--gt",
                                               (dir / "gt.csv").string(), "--stack", a.string(), b.string()}));
  // RGBE quantizes e^2, so the log spread is 1 up to the mantissa step
  CHECK(k["mean_std"].get<double>() == doctest::Approx(1.0).epsilon(2e-3));

  fixture::write_text(dir / "other.csv", "location_id,gt_lux\na,100\nc,400\n");
  CHECK(fixture::run_cli({"metrics", "--pred", (dir / "pred.csv").string(), "--gt",
                          (dir / "other.csv").string()})
            .code == cli::kExitInput);
  CHECK(fixture::run_cli({"metrics", "--pred", (dir / "pred.csv").string(), "--gt",
                          (dir / "gt.csv").string(), "--stack", a.string()})
            .code == cli::kExitInput);
}

TEST_CASE("false colour of a uniform panorama is a single colour") {
  fixture::TempDir dir;
  const auto hdr = write_hdr(dir, "flat.hdr", HdrImage::filled(64, 32, 0.5));
  const auto png = dir / "flat.png";
  const json j = stdout_json(
      fixture::run_cli({"falsecolor", "--hdr", hdr.string(), "--out", png.string(), "--lo", "1", "--hi", "1000"}));
  CHECK(j["width"] == 64);
  CHECK(j["legend"].size() == 5);
  const Raster8 r = decode_png(read_file(png));
  REQUIRE(r.rgb.size() == 64 * 32 * 3);
  for (std::size_t i = 3; i < r.rgb.size(); ++i) CHECK(r.rgb[i] == r.rgb[i % 3]);
  CHECK(fixture::run_cli({"falsecolor", "--hdr", hdr.string(), "--out", png.string(), "--lo", "10", "--hi", "1"})
            .code == cli::kExitInput);
}

TEST_CASE("fit-demo: illuminance supervision does not lose accuracy") {
  fixture::TempDir dir;
  fixture::write_text(dir / "fit.json", R"({"scenes": 10, "target_miscale": 1.5})");
  const auto config = (dir / "fit.json").string();
  const json with = stdout_json(fixture::run_cli({"fit-demo", "--config", config, "--illuminance"}));
  const json without = stdout_json(fixture::run_cli({"fit-demo", "--config", config}));
  CHECK(with["acc_25"].get<double>() >= without["acc_25"].get<double>());

  fixture::write_text(dir / "bad.json", R"({"scenes": "many"})");
  CHECK(fixture::run_cli({"fit-demo", "--config", (dir / "bad.json").string()}).code == cli::kExitInput);
}

}  // TEST_SUITE
