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

#include "panolux/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "panolux/error.hpp"
#include "panolux/ldr_io.hpp"
#include "panolux/metrics.hpp"
#include "panolux/multishot.hpp"
#include "panolux/photometry.hpp"
#include "panolux/rgbe.hpp"
#include "panolux/toyfit.hpp"

namespace panolux::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// small helpers

std::string text_of(const fs::path& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const fs::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

nlohmann::json parse_json(const std::string& text, const fs::path& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, origin.string() + ": " + e.what());
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, const fs::path& origin, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v)) {
    throw Error(Errc::malformed, origin.string() + ":" + std::to_string(line) +
                                     ": not a number: '" + field + "'");
  }
  return v;
}

// Two-column CSV with the given header; blank lines are ignored.
std::vector<std::pair<std::string, std::string>> read_two_column_csv(
    const fs::path& path, std::string_view first, std::string_view second) {
  std::istringstream in(text_of(path));
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  std::vector<std::pair<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw Error(Errc::malformed, path.string() + ":" + std::to_string(number) +
                                       ": expected 2 fields, got " +
                                       std::to_string(fields.size()));
    }
    if (!header_seen) {
      if (fields[0] != first || fields[1] != second) {
        throw Error(Errc::malformed, path.string() + ": header must be '" + std::string(first) +
                                         "," + std::string(second) + "'");
      }
      header_seen = true;
      continue;
    }
    rows.emplace_back(fields[0], fields[1]);
  }
  if (rows.empty()) throw Error(Errc::malformed, path.string() + ": no data rows");
  return rows;
}

std::map<std::string, double> read_lux_table(const fs::path& path, std::string_view column) {
  std::map<std::string, double> out;
  std::size_t row = 1;
  for (const auto& [id, value] : read_two_column_csv(path, "location_id", column)) {
    ++row;
    if (id.empty()) throw Error(Errc::malformed, path.string() + ": empty location_id");
    if (!out.emplace(id, parse_number(value, path, row)).second) {
      throw Error(Errc::malformed, path.string() + ": duplicate location_id '" + id + "'");
    }
  }
  return out;
}

HdrImage load_hdr(const fs::path& path) { return read_rgbe(read_file(path)); }

// ---------------------------------------------------------------------------
// commands

struct MergeArgs {
  std::string manifest;
  std::string out;
  double lambda = kDefaultSmoothing;
  int samples = kDefaultResponseSamples;
  double scale = 1.0;
};

int cmd_merge(const MergeArgs& a, std::ostream& out) {
  const fs::path manifest_path(a.manifest);
  const auto j = parse_json(text_of(manifest_path), manifest_path);
  ExposureBracket bracket;
  std::optional<double> gt_lux;
  try {
    bracket.location_id = j.at("location_id").get<std::string>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() < 2) {
      throw Error(Errc::too_few_shots, "manifest needs at least 2 entries");
    }
    for (const auto& e : entries) {
      const fs::path rel(e.at("path").get<std::string>());
      const fs::path path = rel.is_absolute() ? rel : manifest_path.parent_path() / rel;
      const double exposure = e.at("exposure_ms").get<double>();
      bracket.shots.push_back(read_ldr(read_file(path), exposure));
    }
    if (j.contains("gt_lux") && !j.at("gt_lux").is_null()) gt_lux = j.at("gt_lux").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, manifest_path.string() + ": " + e.what());
  }
  if (!(a.scale > 0.0)) throw Error(Errc::invalid_argument, "--scale must be positive");

  const CameraResponse response = solve_response(bracket, a.samples, a.lambda);
  const HdrImage hdr = merge_bracket(bracket, response);
  write_file(a.out, write_rgbe(hdr));

  ordered_json report;
  report["location_id"] = bracket.location_id;
  report["shots"] = bracket.shots.size();
  report["scale"] = a.scale;
  report["illuminance_lux"] = illuminance_of_hdr(hdr, a.scale);
  if (gt_lux) report["gt_lux"] = *gt_lux;
  report["output"] = a.out;
  out << report.dump() << '\n';
  return kExitOk;
}

int cmd_illuminance(const std::string& hdr_path, double scale, std::ostream& out) {
  if (!(scale > 0.0)) throw Error(Errc::invalid_argument, "--scale must be positive");
  const HdrImage hdr = load_hdr(hdr_path);
  ordered_json report;
  report["illuminance_lux"] = illuminance_of_hdr(hdr, scale);
  out << report.dump() << '\n';
  return kExitOk;
}

int cmd_calibrate(const std::string& pairs_path, std::ostream& out) {
  std::vector<LuxPair> pairs;
  std::size_t row = 1;
  for (const auto& [est, truth] : read_two_column_csv(pairs_path, "estimated_lux", "true_lux")) {
    ++row;
    pairs.push_back({parse_number(est, pairs_path, row), parse_number(truth, pairs_path, row)});
  }
  const CalibrationResult r = olse_scale(pairs);
  ordered_json report;
  report["scale"] = r.scale;
  report["residual_rms"] = r.residual_rms;
  report["n_pairs"] = pairs.size();
  out << report.dump() << '\n';
  return kExitOk;
}

struct MetricsArgs {
  std::string pred;
  std::string gt;
  std::vector<std::string> stack;
  std::string csv;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  const auto pred = read_lux_table(a.pred, "pred_lux");
  const auto gt = read_lux_table(a.gt, "gt_lux");
  std::vector<LuxPair> pairs;
  for (const auto& [id, value] : pred) {  // std::map: ordered by location_id
    const auto it = gt.find(id);
    if (it == gt.end()) {
      throw Error(Errc::malformed, "no ground truth for location '" + id + "'");
    }
    pairs.push_back({value, it->second});
  }
  std::vector<HdrImage> stack;
  for (const auto& p : a.stack) stack.push_back(load_hdr(p));
  if (stack.size() == 1) throw Error(Errc::too_few_shots, "--stack needs at least 2 images");

  const MetricReport report = make_report(pairs, stack);
  if (!a.csv.empty()) {
    write_text(a.csv, MetricReport::csv_header() + "\n" + report.to_csv_line() + "\n");
  }
  out << report.to_json() << '\n';
  return kExitOk;
}

struct FalseColorArgs {
  std::string hdr;
  double lo = 1.0;
  double hi = 10000.0;
  std::string out;
};

int cmd_falsecolor(const FalseColorArgs& a, std::ostream& out) {
  const HdrImage hdr = load_hdr(a.hdr);
  const FalseColorImage img = false_color(luminance_from_hdr(hdr), a.lo, a.hi);
  write_file(a.out, encode_png(img.raster));

  // legend: ramp colour at five log-spaced luminance stops
  ordered_json legend = ordered_json::array();
  const auto& ramp = false_color_ramp();
  for (int k = 0; k <= 4; ++k) {
    const double l = std::pow(10.0, std::log10(a.lo) + k * (std::log10(a.hi) - std::log10(a.lo)) / 4);
    const auto& c = ramp[false_color_index(l, a.lo, a.hi)];
    legend.push_back({{"luminance", l}, {"rgb", {c[0], c[1], c[2]}}});
  }
  ordered_json report;
  report["output"] = a.out;
  report["width"] = img.raster.width;
  report["height"] = img.raster.height;
  report["lo"] = img.lo;
  report["hi"] = img.hi;
  report["legend"] = legend;
  out << report.dump() << '\n';
  return kExitOk;
}

struct FitDemoArgs {
  std::string config;
  bool illuminance = false;
  std::string csv;
};

int cmd_fit_demo(const FitDemoArgs& a, std::uint64_t seed, std::ostream& out) {
  AblationConfig config;
  config.seed = seed;
  std::size_t scenes = 10;
  if (!a.config.empty()) {
    const auto j = parse_json(text_of(a.config), a.config);
    try {
      scenes = j.value("scenes", scenes);
      config.width = j.value("width", config.width);
      config.height = j.value("height", config.height);
      config.camera_gamma = j.value("camera_gamma", config.camera_gamma);
      config.noise_sigma = j.value("noise_sigma", config.noise_sigma);
      config.target_miscale = j.value("target_miscale", config.target_miscale);
      config.bracket_ms = j.value("bracket_ms", config.bracket_ms);
      config.steps = j.value("steps", config.steps);
      config.lr = j.value("lr", config.lr);
      config.illuminance_units = j.value("illuminance_units", config.illuminance_units);
      config.weights.lambda_tv = j.value("lambda_tv", config.weights.lambda_tv);
      config.weights.lambda_p = j.value("lambda_p", config.weights.lambda_p);
      config.weights.lambda_illuminance = j.value("lambda", config.weights.lambda_illuminance);
      config.weights.log_epsilon = j.value("log_epsilon", config.weights.log_epsilon);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::malformed, a.config + ": " + e.what());
    }
  }
  const auto specs = random_scenes(scenes, seed, config.width, config.height);
  const MetricReport report = ablation_run(specs, a.illuminance, config);
  if (!a.csv.empty()) {
    write_text(a.csv, MetricReport::csv_header() + "\n" + report.to_csv_line() + "\n");
  }
  out << report.to_json() << '\n';
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Illuminance estimation from HDR panoramas", "panolux"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every stochastic component");

  MergeArgs merge;
  auto* merge_cmd = app.add_subcommand("merge", "Merge an exposure bracket into a .hdr panorama");
  merge_cmd->add_option("--manifest", merge.manifest, "Bracket manifest (JSON)")->required();
  merge_cmd->add_option("--out", merge.out, "Output Radiance .hdr")->required();
  merge_cmd->add_option("--lambda", merge.lambda, "Response smoothness weight");
  merge_cmd->add_option("--samples", merge.samples, "Pixels sampled for response recovery");
  merge_cmd->add_option("--scale", merge.scale, "Device scale applied to reported lux");

  std::string hdr_path;
  double scale = 1.0;
  auto* illum_cmd = app.add_subcommand("illuminance", "Report the illuminance of a .hdr panorama");
  illum_cmd->add_option("--hdr", hdr_path, "Radiance .hdr input")->required();
  illum_cmd->add_option("--scale", scale, "Device scale factor");

  std::string pairs_path;
  auto* calib_cmd = app.add_subcommand("calibrate", "Fit a device scale from lux pairs");
  calib_cmd->add_option("--pairs", pairs_path, "CSV with estimated_lux,true_lux")->required();

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Accuracy and consistency report");
  metrics_cmd->add_option("--pred", metrics.pred, "CSV with location_id,pred_lux")->required();
  metrics_cmd->add_option("--gt", metrics.gt, "CSV with location_id,gt_lux")->required();
  metrics_cmd->add_option("--stack", metrics.stack, "HDR expansions of one scene");
  metrics_cmd->add_option("--csv", metrics.csv, "Also write the report as CSV");

  FalseColorArgs fc;
  auto* fc_cmd = app.add_subcommand("falsecolor", "Render a false-colour luminance map");
  fc_cmd->add_option("--hdr", fc.hdr, "Radiance .hdr input")->required();
  fc_cmd->add_option("--lo", fc.lo, "Luminance at the blue end (cd/m^2)");
  fc_cmd->add_option("--hi", fc.hi, "Luminance at the red end (cd/m^2)");
  fc_cmd->add_option("--out", fc.out, "Output PNG")->required();

  FitDemoArgs fit;
  auto* fit_cmd = app.add_subcommand("fit-demo", "Synthetic illuminance-loss ablation");
  fit_cmd->add_option("--config", fit.config, "Ablation configuration (JSON)");
  fit_cmd->add_flag("--illuminance", fit.illuminance, "Train with the illuminance loss");
  fit_cmd->add_option("--csv", fit.csv, "Also write the report as CSV");

  std::vector<const char*> argv{"panolux"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (merge_cmd->parsed()) return cmd_merge(merge, out);
    if (illum_cmd->parsed()) return cmd_illuminance(hdr_path, scale, out);
    if (calib_cmd->parsed()) return cmd_calibrate(pairs_path, out);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics, out);
    if (fc_cmd->parsed()) return cmd_falsecolor(fc, out);
    if (fit_cmd->parsed()) return cmd_fit_demo(fit, seed, out);
  } catch (const Error& e) {
    err << "panolux: " << errc_name(e.code()) << ": " << e.what();
    if (e.byte_offset()) err << " (byte " << *e.byte_offset() << ")";
    err << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    err << "panolux: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace panolux::cli
