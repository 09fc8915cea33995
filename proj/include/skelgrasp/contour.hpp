// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "skelgrasp/boundary.hpp"
#include "skelgrasp/cloud.hpp"

namespace skelgrasp {

/// Ordered cloud cell indices along a traced boundary. When closed, the last element links
/// back to the first.
struct Contour {
  std::vector<std::size_t> ordered;
  bool closed = false;

  std::size_t size() const { return ordered.size(); }
  bool empty() const { return ordered.empty(); }
};

/// Outcome of one trace: the contour plus every boundary point the walk consumed
/// (including points later dropped by backtracking).
struct TraceResult {
  Contour contour;
  std::vector<std::size_t> consumed;
};

/// Boundary points lying on a depth discontinuity: at least one 4-neighbor pixel inside the
/// image is invalid or differs in depth by more than `max_step`. This keeps the one-pixel
/// silhouette edge of the boundary band and drops isolated noise responses.
inline BoundarySet silhouette_edges(const BoundarySet& boundary, const OrganizedCloud& cloud, double max_step) {
  if (!(max_step > 0.0)) throw Error("silhouette_edges: step must be positive");
  BoundarySet out;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const std::size_t idx = boundary.indices[k];
    const Pixel p = cloud.pixel_of(idx);
    const double z = cloud.point(idx).z;
    bool edge = false;
    const Pixel nb[4] = {{p.u + 1, p.v}, {p.u - 1, p.v}, {p.u, p.v + 1}, {p.u, p.v - 1}};
    for (const Pixel& q : nb) {
      if (q.u < 0 || q.v < 0 || q.u >= cloud.width() || q.v >= cloud.height()) continue;
      if (!cloud.valid(q.u, q.v) || std::abs(cloud.point(cloud.index_of(q.u, q.v)).z - z) > max_step) edge = true;
    }
    if (!edge) continue;
    out.indices.push_back(idx);
    out.scores.push_back(boundary.scores[k]);
  }
  return out;
}

/// Greedy nearest-neighbor walker over a shrinking set of boundary points.
///
/// A trace starts at the remaining point with the lowest z (ties: lowest cell index), repeatedly
/// steps to the nearest remaining point within the link radius and removes it. Once the walk
/// holds at least three points and has been farther than the link radius from the start, the
/// start competes as a candidate too (winning ties); choosing it closes the loop. With no
/// candidate left the tail is dropped and the walk resumes from the new tail.
class ContourTracer {
 public:
  ContourTracer(const BoundarySet& boundary, const OrganizedCloud& cloud, double link_radius)
      : cloud_(&cloud), radius_(link_radius), cell_(link_radius) {
    if (!(link_radius > 0.0)) throw Error("contour: link radius must be positive");
    for (std::size_t idx : boundary.indices) {
      if (idx >= cloud.size() || !cloud.valid(idx)) throw RangeError("contour: boundary index is not a valid cell");
      Slot& slot = slots_[idx];
      if (slot.alive) continue;
      slot.alive = true;
      auto& bucket = grid_[key_of(cloud.point(idx))];
      slot.pos = bucket.size();
      bucket.push_back(idx);
      ++alive_;
      by_depth_.push_back(idx);
    }
    std::sort(by_depth_.begin(), by_depth_.end(), [&](std::size_t a, std::size_t b) {
      const double za = cloud.point(a).z, zb = cloud.point(b).z;
      return za != zb ? za < zb : a < b;
    });
  }

  std::size_t remaining() const { return alive_; }
  bool contains(std::size_t idx) const {
    auto it = slots_.find(idx);
    return it != slots_.end() && it->second.alive;
  }

  /// Removes points from the remaining set (unknown or already removed ids are ignored).
  void remove(std::size_t idx) {
    auto it = slots_.find(idx);
    if (it == slots_.end() || !it->second.alive) return;
    auto& bucket = grid_[key_of(cloud_->point(idx))];
    const std::size_t pos = it->second.pos;
    const std::size_t moved = bucket.back();
    bucket[pos] = moved;
    slots_[moved].pos = pos;
    bucket.pop_back();
    it->second.alive = false;
    --alive_;
  }

  /// Runs one trace from the lowest remaining point; nullopt when nothing remains.
  std::optional<TraceResult> trace() {
    while (depth_cursor_ < by_depth_.size() && !contains(by_depth_[depth_cursor_])) ++depth_cursor_;
    if (depth_cursor_ >= by_depth_.size()) return std::nullopt;
    const std::size_t start = by_depth_[depth_cursor_];
    const Point3 start_pt = cloud_->point(start);

    TraceResult result;
    std::vector<std::size_t>& walk = result.contour.ordered;
    std::vector<std::size_t> best;
    walk.push_back(start);
    remove(start);
    result.consumed.push_back(start);
    const double r2 = radius_ * radius_;
    bool departed = false;

    while (!walk.empty()) {
      const Point3 tail = cloud_->point(walk.back());
      const double ds = squared_distance(tail, start_pt);
      if (ds > r2) departed = true;
      const auto next = nearest(tail);
      if (departed && walk.size() >= 3 && ds <= r2 && (!next || ds <= next->second)) {
        result.contour.closed = true;
        return result;
      }
      if (next) {
        walk.push_back(next->first);
        remove(next->first);
        result.consumed.push_back(next->first);
        continue;
      }
      if (walk.size() > best.size()) best = walk;
      walk.pop_back();
    }
    result.contour.ordered = std::move(best);
    result.contour.closed = false;
    return result;
  }

 private:
  struct Slot {
    std::size_t pos = 0;
    bool alive = false;
  };
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
      h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  Key key_of(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_)),
            static_cast<std::int64_t>(std::floor(p.z / cell_))};
  }

  // Nearest remaining point within the link radius; ties go to the lowest cell index.
  std::optional<std::pair<std::size_t, double>> nearest(const Point3& p) const {
    const Key c = key_of(p);
    const double r2 = radius_ * radius_;
    std::optional<std::pair<std::size_t, double>> best;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid_.end()) continue;
          for (std::size_t idx : it->second) {
            const double d2 = squared_distance(cloud_->point(idx), p);
            if (d2 > r2) continue;
            if (!best || d2 < best->second || (d2 == best->second && idx < best->first)) best = {{idx, d2}};
          }
        }
      }
    }
    return best;
  }

  const OrganizedCloud* cloud_;
  double radius_;
  double cell_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> grid_;
  std::unordered_map<std::size_t, Slot> slots_;
  std::vector<std::size_t> by_depth_;
  std::size_t depth_cursor_ = 0;
  std::size_t alive_ = 0;
};

/// Traces one closed loop through the boundary set, starting at its lowest-z point.
inline Contour trace_closed_contour(const BoundarySet& boundary, const OrganizedCloud& cloud, double link_radius) {
  if (boundary.empty()) throw Error("contour: empty boundary set");
  ContourTracer tracer(boundary, cloud, link_radius);
  return tracer.trace()->contour;
}

/// Traces loops until the boundary set is exhausted; each closed loop's points are removed
/// before the next trace, open walks drop every point they consumed.
inline std::vector<Contour> trace_all_contours(const BoundarySet& boundary, const OrganizedCloud& cloud,
                                               double link_radius) {
  std::vector<Contour> out;
  if (boundary.empty()) return out;
  ContourTracer tracer(boundary, cloud, link_radius);
  while (auto r = tracer.trace())
    if (r->contour.closed) out.push_back(std::move(r->contour));
  return out;
}

/// Pixels of the contour points, in contour order.
inline std::vector<Pixel> contour_pixels(const Contour& contour, const OrganizedCloud& cloud) {
  std::vector<Pixel> out;
  out.reserve(contour.size());
  for (std::size_t idx : contour.ordered) out.push_back(cloud.pixel_of(idx));
  return out;
}

}  // namespace skelgrasp
