// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "skelgrasp/boundary.hpp"
#include "skelgrasp/cloud.hpp"
#include "skelgrasp/contour.hpp"
#include "skelgrasp/segmentation.hpp"
#include "skelgrasp/selection.hpp"
#include "skelgrasp/skeleton.hpp"

namespace skelgrasp {

struct PipelineConfig {
  BoundaryParams boundary;
  double link_radius = 0.02;       ///< contour step limit (m)
  double edge_step = 0.02;         ///< depth jump marking a silhouette edge (m)
  std::size_t min_object_pixels = 300;  ///< minimum mask area not covered by the contour itself
  double max_overlap = 0.5;        ///< reject a mask sharing more than this fraction of the smaller area
  double window_radius = 15.0;     ///< local skeleton window (pixels)
  RectangleGeometry rect;
  ClearanceParams clearance;
  double axis_step = 5.0;          ///< spacing of major-axis candidates (pixels)
  double agreement_px = 5.0;       ///< centers closer than this count as the same grasp
  Strategy strategy = Strategy::Proposed;

  void validate() const {
    boundary.validate();
    rect.validate();
    clearance.validate();
    if (!(link_radius > 0.0)) throw Error("config: link_radius must be positive");
    if (!(edge_step > 0.0)) throw Error("config: edge_step must be positive");
    if (!(window_radius > 0.0)) throw Error("config: window_radius must be positive");
    if (!(max_overlap > 0.0 && max_overlap <= 1.0)) throw Error("config: max_overlap must lie in (0, 1]");
    if (!(axis_step > 0.0)) throw Error("config: axis_step must be positive");
  }
};

/// An object found by contour extraction.
struct DetectedObject {
  Contour contour;
  std::vector<Pixel> contour_pixels;
  ObjectMask mask;
};

struct ObjectResult {
  DetectedObject object;
  Skeleton skeleton;
  std::vector<GraspRectangle> candidates;
  SelectionResult selection;
};

struct PipelineResult {
  std::vector<ObjectResult> objects;
  std::size_t boundary_points = 0;
  std::size_t edge_points = 0;
  std::size_t closed_contours = 0;
  std::string diagnostic;

  bool any_grasp() const {
    return std::any_of(objects.begin(), objects.end(), [](const ObjectResult& o) { return o.selection.found(); });
  }
};

namespace pipeline_detail {

inline bool touches_border(const std::vector<Pixel>& px, int width, int height) {
  return std::any_of(px.begin(), px.end(),
                     [&](const Pixel& p) { return p.u == 0 || p.v == 0 || p.u == width - 1 || p.v == height - 1; });
}

struct Extraction {
  std::vector<DetectedObject> objects;
  std::size_t boundary_points = 0;
  std::size_t edge_points = 0;
  std::size_t closed_contours = 0;
};

}  // namespace pipeline_detail

/// Boundary detection, then repeated contour tracing over the silhouette edges. Each closed
/// contour is filled into a mask; masks touching the image frame, with too little interior,
/// or mostly covering an earlier object are discarded. Accepted masks remove their edge points
/// from further tracing.
inline pipeline_detail::Extraction extract_objects(const OrganizedCloud& cloud, const PipelineConfig& config) {
  config.validate();
  pipeline_detail::Extraction out;
  if (cloud.valid_count() == 0) return out;
  const BoundarySet boundary = detect_boundary(cloud, config.boundary);
  out.boundary_points = boundary.size();
  const BoundarySet edges = silhouette_edges(boundary, cloud, config.edge_step);
  out.edge_points = edges.size();
  if (edges.empty()) return out;
  ContourTracer tracer(edges, cloud, config.link_radius);
  std::vector<std::size_t> areas;
  while (auto trace = tracer.trace()) {
    if (!trace->contour.closed) continue;
    ++out.closed_contours;
    auto px = contour_pixels(trace->contour, cloud);
    if (pipeline_detail::touches_border(px, cloud.width(), cloud.height())) continue;
    const BinaryImage barrier = rasterize_contour(px, cloud.width(), cloud.height());
    ObjectMask mask = object_mask(barrier, mean_pixel(px));
    const std::size_t area = count_set(mask.bits);
    if (area < count_set(barrier) + config.min_object_pixels) continue;
    bool overlaps = false;
    for (std::size_t k = 0; k < out.objects.size() && !overlaps; ++k) {
      std::size_t shared = 0;
      const auto& other = out.objects[k].mask.bits.data();
      for (std::size_t i = 0; i < other.size(); ++i) shared += other[i] & mask.bits.data()[i];
      overlaps = static_cast<double>(shared) > config.max_overlap * static_cast<double>(std::min(area, areas[k]));
    }
    if (overlaps) continue;
    for (std::size_t idx : edges.indices) {
      const Pixel p = cloud.pixel_of(idx);
      if (mask.bits(p.v, p.u)) tracer.remove(idx);
    }
    areas.push_back(area);
    out.objects.push_back({std::move(trace->contour), std::move(px), std::move(mask)});
  }
  return out;
}

/// Grasp selection for one object with the given strategy.
inline SelectionResult select_for(Strategy strategy, const ObjectResult& obj, const OrganizedCloud& cloud,
                                  const PipelineConfig& config) {
  switch (strategy) {
    case Strategy::Centroid: return strategy_centroid(obj.object.mask, cloud, config.rect, config.clearance);
    case Strategy::MajorAxis:
      return strategy_major_axis(obj.object.mask, cloud, config.rect, config.clearance, config.axis_step);
    case Strategy::Proposed: break;
  }
  if (obj.candidates.empty()) {
    SelectionResult none;
    none.strategy = Strategy::Proposed;
    return none;
  }
  return select_grasp(obj.candidates, obj.object.mask, cloud, config.clearance);
}

/// Full pipeline: one result per detected object, in extraction order.
inline PipelineResult run_pipeline(const OrganizedCloud& cloud, const PipelineConfig& config) {
  if (cloud.size() == 0) throw Error("run_pipeline: empty cloud");
  auto ext = extract_objects(cloud, config);
  PipelineResult out;
  out.boundary_points = ext.boundary_points;
  out.edge_points = ext.edge_points;
  out.closed_contours = ext.closed_contours;
  if (ext.objects.empty()) out.diagnostic = "no closed contour found";
  for (auto& obj : ext.objects) {
    ObjectResult r;
    r.object = std::move(obj);
    r.skeleton = skeletonize(r.object.mask);
    r.candidates = rectangles_for(r.skeleton, config.rect, config.window_radius);
    r.selection = select_for(config.strategy, r, cloud, config);
    out.objects.push_back(std::move(r));
  }
  return out;
}

struct StrategyComparison {
  ObjectResult object;  ///< carries the proposed-strategy selection
  SelectionResult centroid;
  SelectionResult major_axis;
  bool agreement = false;  ///< all three found grasps with centers within agreement_px
};

struct ComparisonReport {
  std::vector<StrategyComparison> objects;
  std::string diagnostic;
};

/// Runs the proposed method and both baselines on every detected object.
inline ComparisonReport compare_strategies(const OrganizedCloud& cloud, PipelineConfig config) {
  config.strategy = Strategy::Proposed;
  auto run = run_pipeline(cloud, config);
  ComparisonReport out;
  out.diagnostic = run.diagnostic;
  for (auto& obj : run.objects) {
    StrategyComparison c;
    c.centroid = select_for(Strategy::Centroid, obj, cloud, config);
    c.major_axis = select_for(Strategy::MajorAxis, obj, cloud, config);
    c.object = std::move(obj);
    const auto& p = c.object.selection;
    if (p.found() && c.centroid.found() && c.major_axis.found()) {
      const GraspRectangle* r[3] = {&p.decision->rectangle, &c.centroid.decision->rectangle,
                                    &c.major_axis.decision->rectangle};
      double spread = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) spread = std::max(spread, std::hypot(r[i]->x - r[j]->x, r[i]->y - r[j]->y));
      c.agreement = spread <= config.agreement_px;
    }
    out.objects.push_back(std::move(c));
  }
  return out;
}

}  // namespace skelgrasp
