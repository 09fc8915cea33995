// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "skelgrasp/pipeline.hpp"
#include "skelgrasp/scenegen.hpp"

namespace skelgrasp {

using Json = nlohmann::ordered_json;

namespace json_detail {

inline void expect_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected a JSON object");
}

inline void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& what) {
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ParseError(what + ": unknown key '" + key + "'");
}

inline const Json& field(const Json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) throw ParseError(what + ": missing '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const std::string& key, const std::string& what) {
  field(j, key, what);
  if (!j.at(key).is_number()) throw ParseError(what + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::int64_t integer(const Json& j, const std::string& key, const std::string& what) {
  field(j, key, what);
  if (!j.at(key).is_number_integer()) throw ParseError(what + ": '" + key + "' must be an integer");
  return j.at(key).get<std::int64_t>();
}

inline std::size_t count(const Json& j, const std::string& key, const std::string& what) {
  const auto v = integer(j, key, what);
  if (v < 0) throw ParseError(what + ": '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

inline std::string text(const Json& j, const std::string& key, const std::string& what) {
  field(j, key, what);
  if (!j.at(key).is_string()) throw ParseError(what + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

template <typename T>
void set_if(const Json& j, const std::string& key, T& dst, const std::string& what) {
  if (!j.contains(key)) return;
  if constexpr (std::is_same_v<T, double>) dst = number(j, key, what);
  else if constexpr (std::is_same_v<T, std::size_t>) dst = count(j, key, what);
  else if constexpr (std::is_same_v<T, int>) dst = static_cast<int>(integer(j, key, what));
  else if constexpr (std::is_same_v<T, std::uint64_t>) dst = static_cast<std::uint64_t>(count(j, key, what));
  else dst = text(j, key, what);
}

inline Json point_json(const Point3& p) { return Json{{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

}  // namespace json_detail

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---- intrinsics -------------------------------------------------------------------------

struct IntrinsicsFile {
  CameraIntrinsics k;
  int width = 640;
  int height = 480;
};

inline IntrinsicsFile intrinsics_from_json(const Json& j) {
  using namespace json_detail;
  const std::string what = "intrinsics";
  expect_object(j, what);
  reject_unknown(j, {"fx", "fy", "cx", "cy", "width", "height"}, what);
  IntrinsicsFile out;
  out.k = {number(j, "fx", what), number(j, "fy", what), number(j, "cx", what), number(j, "cy", what)};
  out.width = static_cast<int>(integer(j, "width", what));
  out.height = static_cast<int>(integer(j, "height", what));
  if (out.width <= 0 || out.height <= 0) throw ParseError(what + ": image size must be positive");
  out.k.validate(out.width, out.height);
  return out;
}

inline Json to_json(const CameraIntrinsics& k, int width, int height) {
  return Json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", width}, {"height", height}};
}

// ---- pipeline config --------------------------------------------------------------------

/// Applies the keys present in a flat config document on top of `base`.
inline PipelineConfig config_from_json(const Json& j, PipelineConfig base = {}) {
  using namespace json_detail;
  const std::string what = "config";
  expect_object(j, what);
  reject_unknown(j,
                 {"rs", "th", "min_neighbors", "link_radius", "edge_step", "min_object_pixels", "max_overlap",
                  "window_radius", "rect_len", "rect_width", "clearance_th", "min_region_points", "axis_step",
                  "agreement_px", "strategy"},
                 what);
  set_if(j, "rs", base.boundary.radius, what);
  set_if(j, "th", base.boundary.threshold, what);
  set_if(j, "min_neighbors", base.boundary.min_neighbors, what);
  set_if(j, "link_radius", base.link_radius, what);
  set_if(j, "edge_step", base.edge_step, what);
  set_if(j, "min_object_pixels", base.min_object_pixels, what);
  set_if(j, "max_overlap", base.max_overlap, what);
  set_if(j, "window_radius", base.window_radius, what);
  set_if(j, "rect_len", base.rect.length, what);
  set_if(j, "rect_width", base.rect.width, what);
  set_if(j, "clearance_th", base.clearance.th, what);
  set_if(j, "min_region_points", base.clearance.min_region_points, what);
  set_if(j, "axis_step", base.axis_step, what);
  set_if(j, "agreement_px", base.agreement_px, what);
  if (j.contains("strategy")) base.strategy = strategy_from_string(text(j, "strategy", what));
  base.validate();
  return base;
}

inline Json to_json(const PipelineConfig& c) {
  return Json{{"rs", c.boundary.radius},
              {"th", c.boundary.threshold},
              {"min_neighbors", c.boundary.min_neighbors},
              {"link_radius", c.link_radius},
              {"edge_step", c.edge_step},
              {"min_object_pixels", c.min_object_pixels},
              {"max_overlap", c.max_overlap},
              {"window_radius", c.window_radius},
              {"rect_len", c.rect.length},
              {"rect_width", c.rect.width},
              {"clearance_th", c.clearance.th},
              {"min_region_points", c.clearance.min_region_points},
              {"axis_step", c.axis_step},
              {"agreement_px", c.agreement_px},
              {"strategy", to_string(c.strategy)}};
}

// ---- scenes -----------------------------------------------------------------------------

/// Scene file: a SceneSpec, optionally with {"clutter": {"count": n, "seed": s}} asking for n
/// random objects on top of the listed ones.
inline SceneSpec scene_from_json(const Json& j) {
  using namespace json_detail;
  const std::string what = "scene";
  expect_object(j, what);
  reject_unknown(j,
                 {"width", "height", "camera_height", "intrinsics", "objects", "noise_sigma", "dropout_cos", "seed",
                  "clutter"},
                 what);
  SceneSpec s;
  set_if(j, "width", s.width, what);
  set_if(j, "height", s.height, what);
  set_if(j, "camera_height", s.camera_height, what);
  set_if(j, "noise_sigma", s.noise_sigma, what);
  set_if(j, "dropout_cos", s.dropout_cos, what);
  set_if(j, "seed", s.seed, what);
  if (j.contains("intrinsics")) {
    const Json& k = j.at("intrinsics");
    expect_object(k, "scene.intrinsics");
    reject_unknown(k, {"fx", "fy", "cx", "cy"}, "scene.intrinsics");
    set_if(k, "fx", s.intrinsics.fx, "scene.intrinsics");
    set_if(k, "fy", s.intrinsics.fy, "scene.intrinsics");
    set_if(k, "cx", s.intrinsics.cx, "scene.intrinsics");
    set_if(k, "cy", s.intrinsics.cy, "scene.intrinsics");
  } else {
    s.intrinsics.cx = (s.width - 1) / 2.0;
    s.intrinsics.cy = (s.height - 1) / 2.0;
  }
  if (j.contains("objects")) {
    if (!j.at("objects").is_array()) throw ParseError("scene: 'objects' must be an array");
    for (const Json& o : j.at("objects")) {
      const std::string ow = "scene.objects";
      expect_object(o, ow);
      reject_unknown(o, {"shape", "pose", "dims"}, ow);
      SceneObject obj;
      obj.shape = shape_from_string(text(o, "shape", ow));
      if (o.contains("pose")) {
        const Json& p = o.at("pose");
        expect_object(p, ow + ".pose");
        reject_unknown(p, {"x", "y", "yaw", "base"}, ow + ".pose");
        set_if(p, "x", obj.pose.x, ow);
        set_if(p, "y", obj.pose.y, ow);
        set_if(p, "yaw", obj.pose.yaw, ow);
        set_if(p, "base", obj.pose.base, ow);
      }
      if (o.contains("dims")) {
        const Json& d = o.at("dims");
        expect_object(d, ow + ".dims");
        reject_unknown(d, {"length", "width", "height", "radius", "thickness"}, ow + ".dims");
        set_if(d, "length", obj.dims.length, ow);
        set_if(d, "width", obj.dims.width, ow);
        set_if(d, "height", obj.dims.height, ow);
        set_if(d, "radius", obj.dims.radius, ow);
        set_if(d, "thickness", obj.dims.thickness, ow);
      }
      s.objects.push_back(obj);
    }
  }
  if (j.contains("clutter")) {
    const Json& c = j.at("clutter");
    expect_object(c, "scene.clutter");
    reject_unknown(c, {"count", "seed"}, "scene.clutter");
    const auto n = static_cast<int>(count(c, "count", "scene.clutter"));
    const auto seed = c.contains("seed") ? static_cast<std::uint64_t>(count(c, "seed", "scene.clutter")) : s.seed;
    s = clutter(s, n, seed);
  }
  validate(s);
  return s;
}

inline Json to_json(const SceneSpec& s) {
  Json objects = Json::array();
  for (const auto& o : s.objects) {
    objects.push_back(Json{{"shape", to_string(o.shape)},
                           {"pose", {{"x", o.pose.x}, {"y", o.pose.y}, {"yaw", o.pose.yaw}, {"base", o.pose.base}}},
                           {"dims",
                            {{"length", o.dims.length},
                             {"width", o.dims.width},
                             {"height", o.dims.height},
                             {"radius", o.dims.radius},
                             {"thickness", o.dims.thickness}}}});
  }
  return Json{{"width", s.width},
              {"height", s.height},
              {"camera_height", s.camera_height},
              {"intrinsics", {{"fx", s.intrinsics.fx}, {"fy", s.intrinsics.fy}, {"cx", s.intrinsics.cx}, {"cy", s.intrinsics.cy}}},
              {"noise_sigma", s.noise_sigma},
              {"dropout_cos", s.dropout_cos},
              {"seed", s.seed},
              {"objects", std::move(objects)}};
}

/// Ground truth summary; `mask_files` names the PNG written for each object mask.
inline Json to_json(const SceneSpec& spec, const GroundTruth& gt, const std::vector<std::string>& mask_files) {
  Json objects = Json::array();
  for (std::size_t i = 0; i < gt.masks.size(); ++i) {
    objects.push_back(Json{{"index", i},
                           {"shape", to_string(spec.objects.at(i).shape)},
                           {"centroid_m", json_detail::point_json(gt.centroids.at(i))},
                           {"visible_pixels", count_set(gt.masks[i])},
                           {"mask", i < mask_files.size() ? mask_files[i] : std::string()}});
  }
  return Json{{"table_depth", gt.table_depth}, {"objects", std::move(objects)}};
}

// ---- results ----------------------------------------------------------------------------

inline Json to_json(const GraspDecision& d, const SelectionResult& s) {
  return Json{{"strategy", to_string(d.strategy)},
              {"u", d.rectangle.x},
              {"v", d.rectangle.y},
              {"alpha_deg", rad2deg(d.rectangle.alpha)},
              {"grasp_point_m", json_detail::point_json(d.grasp_point)},
              {"distance_to_centroid_px", d.distance_to_centroid},
              {"valid_candidates", s.valid_candidates},
              {"rejected", {{"betweenness", s.rejected_betweenness}, {"clearance", s.rejected_clearance}}}};
}

/// A selection outcome: the decision fields when found, otherwise the strategy and counts.
inline Json to_json(const SelectionResult& s) {
  if (s.decision) {
    Json j = to_json(*s.decision, s);
    j["found"] = true;
    return j;
  }
  return Json{{"strategy", to_string(s.strategy)},
              {"found", false},
              {"valid_candidates", s.valid_candidates},
              {"rejected", {{"betweenness", s.rejected_betweenness}, {"clearance", s.rejected_clearance}}}};
}

/// Grasp output: the first object with a grasp at top level, plus one entry per object.
inline Json to_json(const PipelineResult& r, Strategy strategy) {
  Json objects = Json::array();
  const ObjectResult* first = nullptr;
  for (std::size_t i = 0; i < r.objects.size(); ++i) {
    const ObjectResult& o = r.objects[i];
    Json e = to_json(o.selection);
    e["object"] = i;
    e["mask_pixels"] = count_set(o.object.mask.bits);
    e["candidates"] = o.candidates.size();
    objects.push_back(std::move(e));
    if (!first && o.selection.found()) first = &o;
  }
  Json out = first ? to_json(*first->selection.decision, first->selection)
                   : Json{{"strategy", to_string(strategy)}, {"found", false}};
  if (first) out["found"] = true;
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  out["objects"] = std::move(objects);
  return out;
}

inline Json to_json(const ComparisonReport& r) {
  Json objects = Json::array();
  for (std::size_t i = 0; i < r.objects.size(); ++i) {
    const StrategyComparison& c = r.objects[i];
    objects.push_back(Json{{"object", i},
                           {"proposed", to_json(c.object.selection)},
                           {"centroid", to_json(c.centroid)},
                           {"major-axis", to_json(c.major_axis)},
                           {"agreement", c.agreement}});
  }
  Json out{{"objects", std::move(objects)}};
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  return out;
}

}  // namespace skelgrasp
