// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

// skelgrasp: grasp rectangles from organized point clouds.
//
//   skelgrasp estimate --cloud scene.pcd --out grasp.json [--overlay o.png]
//   skelgrasp estimate --depth d.png --intrinsics k.json --out grasp.json
//   skelgrasp synth --spec scene.json --out-dir DIR
//   skelgrasp compare --cloud scene.pcd --out report.json
//
// Exit status: 0 grasp found, 2 no valid grasp, 1 error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "skelgrasp/skelgrasp.hpp"

namespace fs = std::filesystem;
using namespace skelgrasp;

namespace {

constexpr int kFound = 0;
constexpr int kError = 1;
constexpr int kNoGrasp = 2;

struct InputOptions {
  std::string cloud;
  std::string depth;
  std::string intrinsics;
  std::string config;
};

struct Overrides {
  std::optional<double> rs, th, rect_len, rect_width, window_radius, link_radius, clearance_th;
};

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--cloud", in.cloud, "organized ASCII PCD");
  cmd->add_option("--depth", in.depth, "16-bit depth PNG in millimeters");
  cmd->add_option("--intrinsics", in.intrinsics, "intrinsics JSON {fx, fy, cx, cy, width, height}");
  cmd->add_option("--config", in.config, "flat JSON config");
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--rs", o.rs, "boundary neighborhood radius (m)");
  cmd->add_option("--th", o.th, "boundary score threshold");
  cmd->add_option("--rect-len", o.rect_len, "rectangle length (px)");
  cmd->add_option("--rect-width", o.rect_width, "rectangle width (px)");
  cmd->add_option("--window-radius", o.window_radius, "skeleton window radius (px)");
  cmd->add_option("--link-radius", o.link_radius, "contour link radius (m)");
  cmd->add_option("--clearance-th", o.clearance_th, "finger clearance depth (m)");
}

OrganizedCloud load_input(const InputOptions& in) {
  if (!in.cloud.empty()) {
    if (!in.depth.empty()) throw Error("give either --cloud or --depth, not both");
    return load_pcd(in.cloud);
  }
  if (in.depth.empty()) throw Error("an input is required: --cloud, or --depth with --intrinsics");
  if (in.intrinsics.empty()) throw Error("--depth needs --intrinsics");
  const IntrinsicsFile k = intrinsics_from_json(load_json(in.intrinsics));
  return from_depth(read_depth_png(in.depth), k.k, k.width, k.height);
}

PipelineConfig load_config(const InputOptions& in, const Overrides& o) {
  PipelineConfig c;
  if (!in.config.empty()) c = config_from_json(load_json(in.config));
  if (o.rs) c.boundary.radius = *o.rs;
  if (o.th) c.boundary.threshold = *o.th;
  if (o.rect_len) c.rect.length = *o.rect_len;
  if (o.rect_width) c.rect.width = *o.rect_width;
  if (o.window_radius) c.window_radius = *o.window_radius;
  if (o.link_radius) c.link_radius = *o.link_radius;
  if (o.clearance_th) c.clearance.th = *o.clearance_th;
  c.validate();
  return c;
}

void emit(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(path, j);
  }
}

int run_estimate(const InputOptions& in, const Overrides& o, const std::string& strategy, const std::string& out,
                 const std::string& overlay) {
  PipelineConfig config = load_config(in, o);
  if (!strategy.empty()) config.strategy = strategy_from_string(strategy);
  const OrganizedCloud cloud = load_input(in);
  const PipelineResult result = run_pipeline(cloud, config);
  emit(to_json(result, config.strategy), out);
  if (!overlay.empty()) {
    RgbImage img(cloud.width(), cloud.height(), OverlayPalette{}.background);
    for (const auto& obj : result.objects)
      paint_object(img, obj.object.mask.bits, obj.skeleton, obj.candidates, obj.selection.decision);
    write_rgb_png(overlay, img);
  }
  return result.any_grasp() ? kFound : kNoGrasp;
}

int run_compare(const InputOptions& in, const Overrides& o, const std::string& out) {
  const PipelineConfig config = load_config(in, o);
  const OrganizedCloud cloud = load_input(in);
  const ComparisonReport report = compare_strategies(cloud, config);
  emit(to_json(report), out);
  for (const auto& c : report.objects)
    if (c.object.selection.found()) return kFound;
  return kNoGrasp;
}

int run_synth(const std::string& spec_path, const std::string& out_dir) {
  const SceneSpec spec = scene_from_json(load_json(spec_path));
  const RenderedScene scene = render(spec);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_pcd((dir / "scene.pcd").string(), scene.cloud);
  write_depth_png((dir / "depth.png").string(), to_depth(scene.cloud));
  save_json((dir / "intrinsics.json").string(), to_json(spec.intrinsics, spec.width, spec.height));
  save_json((dir / "scene.json").string(), to_json(spec));
  std::vector<std::string> masks;
  for (std::size_t i = 0; i < scene.truth.masks.size(); ++i) {
    masks.push_back("mask_" + std::to_string(i) + ".png");
    write_mask_png((dir / masks.back()).string(), scene.truth.masks[i]);
  }
  save_json((dir / "truth.json").string(), to_json(spec, scene.truth, masks));
  return kFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skelgrasp: skeleton-based grasp rectangles from organized point clouds"};
  app.require_subcommand(1);

  InputOptions est_in, cmp_in;
  Overrides est_ov, cmp_ov;
  std::string strategy, est_out, overlay, cmp_out, spec, out_dir;

  auto* estimate = app.add_subcommand("estimate", "detect objects and select one grasp per object");
  add_input(estimate, est_in);
  add_overrides(estimate, est_ov);
  estimate->add_option("--strategy", strategy, "proposed | centroid | major-axis")
      ->check(CLI::IsMember({"proposed", "centroid", "major-axis"}));
  estimate->add_option("--out", est_out, "grasp JSON (default: stdout)");
  estimate->add_option("--overlay", overlay, "diagnostic PNG");

  auto* synth = app.add_subcommand("synth", "render a synthetic scene with ground truth");
  synth->add_option("--spec", spec, "scene JSON")->required();
  synth->add_option("--out-dir", out_dir, "output directory")->required();

  auto* compare = app.add_subcommand("compare", "run the proposed strategy and both baselines");
  add_input(compare, cmp_in);
  add_overrides(compare, cmp_ov);
  compare->add_option("--out", cmp_out, "report JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*estimate) return run_estimate(est_in, est_ov, strategy, est_out, overlay);
    if (*synth) return run_synth(spec, out_dir);
    if (*compare) return run_compare(cmp_in, cmp_ov, cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "skelgrasp: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
