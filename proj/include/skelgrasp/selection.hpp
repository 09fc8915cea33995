// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skelgrasp/cloud.hpp"
#include "skelgrasp/segmentation.hpp"
#include "skelgrasp/skeleton.hpp"

namespace skelgrasp {

struct ClearanceParams {
  double th = 0.03;  ///< required depth margin of finger regions below the grasp depth (m)
  std::size_t min_region_points = 5;

  void validate() const {
    if (!(th > 0.0)) throw Error("clearance: th must be positive");
  }
};

enum class Strategy { Proposed, Centroid, MajorAxis };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Proposed: return "proposed";
    case Strategy::Centroid: return "centroid";
    case Strategy::MajorAxis: return "major-axis";
  }
  return "proposed";
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "proposed") return Strategy::Proposed;
  if (s == "centroid") return Strategy::Centroid;
  if (s == "major-axis" || s == "major_axis") return Strategy::MajorAxis;
  throw ParseError("unknown strategy '" + s + "'");
}

enum class Rejection { None, Betweenness, Clearance };

inline std::string to_string(Rejection r) {
  switch (r) {
    case Rejection::None: return "none";
    case Rejection::Betweenness: return "betweenness";
    case Rejection::Clearance: return "clearance";
  }
  return "none";
}

/// A cloud point inside a rectangle footprint, with its coordinate along the finger-travel axis.
struct PartitionPoint {
  Pixel pixel;
  Point3 point;
  double s = 0.0;
};

/// Points under a rectangle split into the object region and the two finger regions.
/// Non-object points lying within the object's extent along the travel axis sit between the
/// closed fingers and belong to neither finger region; they are only counted.
struct CandidatePartition {
  GraspRectangle rect;
  std::vector<PartitionPoint> object_points;
  std::vector<PartitionPoint> left_points;
  std::vector<PartitionPoint> right_points;
  std::size_t enclosed_points = 0;
};

/// Whether pixel center (u, v) lies inside the rectangle.
inline bool in_footprint(const GraspRectangle& r, double u, double v) {
  const double du = u - r.x, dv = v - r.y;
  const double s = du * r.axis_x() + dv * r.axis_y();
  const double t = -du * r.axis_y() + dv * r.axis_x();
  return std::abs(s) <= r.length / 2 && std::abs(t) <= r.width / 2;
}

/// Corners of the rectangle in (column, row), counter-clockwise starting at (-length/2, -width/2).
inline std::array<std::pair<double, double>, 4> rectangle_corners(const GraspRectangle& r) {
  const double ax = r.axis_x(), ay = r.axis_y();
  const double hl = r.length / 2, hw = r.width / 2;
  std::array<std::pair<double, double>, 4> out{};
  const double sl[4] = {-hl, hl, hl, -hl};
  const double sw[4] = {-hw, -hw, hw, hw};
  for (int i = 0; i < 4; ++i) out[i] = {r.x + sl[i] * ax - sw[i] * ay, r.y + sl[i] * ay + sw[i] * ax};
  return out;
}

inline CandidatePartition partition(const GraspRectangle& rect, const BinaryImage& mask, const OrganizedCloud& cloud) {
  if (mask.width() != cloud.width() || mask.height() != cloud.height())
    throw DimensionError("partition: mask and cloud sizes differ");
  const int cu = static_cast<int>(std::lround(rect.x)), cv = static_cast<int>(std::lround(rect.y));
  if (!mask.contains(cv, cu)) throw RangeError("partition: rectangle center outside the image");
  CandidatePartition out;
  out.rect = rect;
  const double reach = 0.5 * std::hypot(rect.length, rect.width) + 1.0;
  const int u0 = std::max(0, static_cast<int>(std::floor(rect.x - reach)));
  const int u1 = std::min(cloud.width() - 1, static_cast<int>(std::ceil(rect.x + reach)));
  const int v0 = std::max(0, static_cast<int>(std::floor(rect.y - reach)));
  const int v1 = std::min(cloud.height() - 1, static_cast<int>(std::ceil(rect.y + reach)));
  std::vector<PartitionPoint> others;
  const double ax = rect.axis_x(), ay = rect.axis_y();
  for (int v = v0; v <= v1; ++v) {
    for (int u = u0; u <= u1; ++u) {
      if (!in_footprint(rect, u, v) || !cloud.valid(u, v)) continue;
      const PartitionPoint p{{u, v}, cloud.point(cloud.index_of(u, v)), (u - rect.x) * ax + (v - rect.y) * ay};
      (mask(v, u) ? out.object_points : others).push_back(p);
    }
  }
  double lo = 0.0, hi = 0.0;
  if (!out.object_points.empty()) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& p : out.object_points) {
      lo = std::min(lo, p.s);
      hi = std::max(hi, p.s);
    }
  }
  for (const auto& p : others) {
    if (out.object_points.empty()) {
      (p.s < 0.0 ? out.left_points : out.right_points).push_back(p);
    } else if (p.s < lo) {
      out.left_points.push_back(p);
    } else if (p.s > hi) {
      out.right_points.push_back(p);
    } else {
      ++out.enclosed_points;
    }
  }
  return out;
}

struct Validity {
  bool valid = false;
  Rejection reason = Rejection::None;
};

/// Betweenness: both finger regions hold enough points and the object lies strictly between
/// them along the travel axis. Clearance: every finger-region point is deeper than the grasp
/// depth by more than th.
inline Validity is_valid(const CandidatePartition& part, double centroid_z, const ClearanceParams& params) {
  const auto max_s = [](const std::vector<PartitionPoint>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : v) m = std::max(m, p.s);
    return m;
  };
  const auto min_s = [](const std::vector<PartitionPoint>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : v) m = std::min(m, p.s);
    return m;
  };
  const bool between = part.left_points.size() >= params.min_region_points &&
                       part.right_points.size() >= params.min_region_points && !part.object_points.empty() &&
                       max_s(part.left_points) < min_s(part.object_points) &&
                       max_s(part.object_points) < min_s(part.right_points);
  if (!between) return {false, Rejection::Betweenness};
  for (const auto* region : {&part.left_points, &part.right_points})
    for (const auto& p : *region)
      if (!(p.point.z - centroid_z > params.th)) return {false, Rejection::Clearance};
  return {true, Rejection::None};
}

/// Depth of the grasp reference: z at the valid object pixel nearest the mask centroid
/// (ties: lowest row, then column).
inline double centroid_depth(const ObjectMask& mask, const OrganizedCloud& cloud) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<double> z;
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < mask.width(); ++u) {
      if (!mask.bits(v, u) || !cloud.valid(u, v)) continue;
      const double d = (v - mask.centroid.row) * (v - mask.centroid.row) + (u - mask.centroid.col) * (u - mask.centroid.col);
      if (d < best) {
        best = d;
        z = cloud.point(cloud.index_of(u, v)).z;
      }
    }
  }
  if (!z) throw Error("centroid_depth: mask has no valid depth");
  return *z;
}

struct GraspDecision {
  GraspRectangle rectangle;
  Point3 grasp_point;
  double distance_to_centroid = 0.0;
  Strategy strategy = Strategy::Proposed;
};

/// Outcome of filtering a candidate list: the decision (if any) and why the others failed.
struct SelectionResult {
  Strategy strategy = Strategy::Proposed;
  std::optional<GraspDecision> decision;
  std::vector<Rejection> reasons;  ///< one per candidate, in candidate order
  std::size_t valid_candidates = 0;
  std::size_t rejected_betweenness = 0;
  std::size_t rejected_clearance = 0;

  bool found() const { return decision.has_value(); }
};

namespace selection_detail {

// 3-D point at the rectangle center; if that pixel has no depth, the nearest object point.
inline Point3 grasp_point(const CandidatePartition& part, const OrganizedCloud& cloud) {
  const int u = static_cast<int>(std::lround(part.rect.x)), v = static_cast<int>(std::lround(part.rect.y));
  if (cloud.valid(u, v)) return cloud.point(cloud.index_of(u, v));
  double best = std::numeric_limits<double>::infinity();
  Point3 out{};
  for (const auto& p : part.object_points) {
    const double d = (p.pixel.u - part.rect.x) * (p.pixel.u - part.rect.x) + (p.pixel.v - part.rect.y) * (p.pixel.v - part.rect.y);
    if (d < best) {
      best = d;
      out = p.point;
    }
  }
  return out;
}

inline double center_distance(const GraspRectangle& r, const RowCol& c) { return std::hypot(r.y - c.row, r.x - c.col); }

// True when a should be preferred over b: smaller distance, then lower row, then lower column.
inline bool closer(double da, const GraspRectangle& a, double db, const GraspRectangle& b) {
  if (da != db) return da < db;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

enum class Pick { Nearest, First };

inline SelectionResult evaluate(std::span<const GraspRectangle> candidates, const ObjectMask& mask,
                                const OrganizedCloud& cloud, const ClearanceParams& params, Strategy strategy, Pick pick) {
  params.validate();
  SelectionResult out;
  out.strategy = strategy;
  const double zc = centroid_depth(mask, cloud);
  out.reasons.reserve(candidates.size());
  std::optional<CandidatePartition> best;
  double best_d = 0.0;
  for (const auto& rect : candidates) {
    const auto part = partition(rect, mask.bits, cloud);
    const auto v = is_valid(part, zc, params);
    out.reasons.push_back(v.reason);
    if (!v.valid) {
      (v.reason == Rejection::Betweenness ? out.rejected_betweenness : out.rejected_clearance)++;
      continue;
    }
    ++out.valid_candidates;
    const double d = center_distance(rect, mask.centroid);
    const bool take = pick == Pick::First ? !best : (!best || closer(d, rect, best_d, best->rect));
    if (take) {
      best = part;
      best_d = d;
    }
  }
  if (best) out.decision = GraspDecision{best->rect, grasp_point(*best, cloud), best_d, strategy};
  return out;
}

}  // namespace selection_detail

/// Keeps candidates passing both conditions and returns the one nearest the mask centroid.
inline SelectionResult select_grasp(std::span<const GraspRectangle> candidates, const ObjectMask& mask,
                                    const OrganizedCloud& cloud, const ClearanceParams& params) {
  if (candidates.empty()) throw Error("select_grasp: no candidates");
  return selection_detail::evaluate(candidates, mask, cloud, params, Strategy::Proposed,
                                    selection_detail::Pick::Nearest);
}

/// Rectangles centered at the mask centroid, orientation swept 0, 10, ..., 170 degrees.
inline std::vector<GraspRectangle> centroid_candidates(const ObjectMask& mask, const RectangleGeometry& geom) {
  geom.validate();
  std::vector<GraspRectangle> out;
  for (int k = 0; k < 18; ++k)
    out.push_back({mask.centroid.col, mask.centroid.row, normalize_half_turn(deg2rad(10.0 * k)), geom.length, geom.width});
  return out;
}

/// First valid rectangle of the centroid sweep.
inline SelectionResult strategy_centroid(const ObjectMask& mask, const OrganizedCloud& cloud,
                                         const RectangleGeometry& geom, const ClearanceParams& params) {
  if (count_set(mask.bits) == 0) throw Error("strategy_centroid: empty mask");
  const auto cands = centroid_candidates(mask, geom);
  return selection_detail::evaluate(cands, mask, cloud, params, Strategy::Centroid, selection_detail::Pick::First);
}

/// Rectangles along the principal axis of the mask pixels through the centroid, every `step`
/// pixels, keeping centers that fall on the mask; fingers close across the axis.
inline std::vector<GraspRectangle> major_axis_candidates(const ObjectMask& mask, const RectangleGeometry& geom,
                                                         double step = 5.0) {
  geom.validate();
  const auto pixels = set_pixels(mask.bits);
  if (pixels.size() < 2) throw Error("strategy_major_axis: mask needs at least two pixels");
  const double axis = fit_slope(pixels).slope;
  const double alpha = normalize_half_turn(axis + std::numbers::pi / 2);
  const double dx = std::cos(axis), dy = std::sin(axis);
  const int reach = static_cast<int>(std::ceil(std::hypot(mask.width(), mask.height()) / step));
  std::vector<GraspRectangle> out;
  for (int k = -reach; k <= reach; ++k) {
    const double x = mask.centroid.col + k * step * dx, y = mask.centroid.row + k * step * dy;
    const int u = static_cast<int>(std::lround(x)), v = static_cast<int>(std::lround(y));
    if (!mask.bits.contains(v, u) || !mask.bits(v, u)) continue;
    out.push_back({x, y, alpha, geom.length, geom.width});
  }
  return out;
}

/// Valid major-axis rectangle nearest the centroid.
inline SelectionResult strategy_major_axis(const ObjectMask& mask, const OrganizedCloud& cloud,
                                           const RectangleGeometry& geom, const ClearanceParams& params,
                                           double step = 5.0) {
  const auto cands = major_axis_candidates(mask, geom, step);
  return selection_detail::evaluate(cands, mask, cloud, params, Strategy::MajorAxis, selection_detail::Pick::Nearest);
}

}  // namespace skelgrasp
