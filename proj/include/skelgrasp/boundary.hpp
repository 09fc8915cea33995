// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skelgrasp/cloud.hpp"
#include "skelgrasp/kdtree.hpp"

namespace skelgrasp {

struct BoundaryParams {
  double radius = 0.02;   ///< neighborhood sphere radius r_s (m)
  double threshold = 0.35;  ///< score threshold t_h; a point is a boundary point iff score > threshold
  std::size_t min_neighbors = 3;

  void validate() const {
    if (!(radius > 0.0)) throw Error("boundary: radius must be positive");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error("boundary: threshold must lie in [0, 1]");
    if (min_neighbors < 1) throw Error("boundary: min_neighbors must be at least 1");
  }
};

/// Boundary points of a cloud, sorted by cell index, with their scores.
struct BoundarySet {
  std::vector<std::size_t> indices;
  std::vector<double> scores;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Below this resultant length the neighbor directions are treated as fully cancelling.
inline constexpr double kResultantEpsilon = 1e-9;

/// Spatial index over the valid cells of a cloud; ids are cell indices.
class CloudIndex {
 public:
  explicit CloudIndex(const OrganizedCloud& cloud) : cloud_(&cloud) {
    const auto ids = cloud.valid_indices();
    std::vector<Point3> pts;
    pts.reserve(ids.size());
    for (auto i : ids) pts.push_back(cloud.point(i));
    tree_ = KdTree(pts, ids);
  }

  const OrganizedCloud& cloud() const { return *cloud_; }
  const KdTree& tree() const { return tree_; }

  /// Valid points within `radius` of p, excluding any point equal to p itself.
  std::vector<Point3> neighbors_within(const Point3& p, double radius) const {
    std::vector<std::pair<std::size_t, Point3>> hits;
    tree_.for_each_within(p, radius, [&](std::size_t id, const Point3& q, double d2) {
      if (d2 > 0.0) hits.emplace_back(id, q);
    });
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Point3> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.second);
    return out;
  }

 private:
  const OrganizedCloud* cloud_;
  KdTree tree_;
};

/// Directional-resultant score of a query point: the mean over neighbors of the dot product
/// between each unit direction d_j = (n_j - p)/|n_j - p| and the normalized resultant
/// R = sum_j d_j / |sum_j d_j|. Returns 0 when the directions cancel.
inline double boundary_score(const Point3& p, std::span<const Point3> neighbors) {
  if (neighbors.empty()) throw Error("boundary_score: no neighbors");
  std::vector<Point3> dirs;
  dirs.reserve(neighbors.size());
  Point3 resultant{};
  for (const Point3& n : neighbors) {
    const Point3 d = n - p;
    const double len = norm(d);
    if (!(len > 0.0)) throw Error("boundary_score: neighbor coincides with the query point");
    dirs.push_back(d * (1.0 / len));
    resultant += dirs.back();
  }
  const double rlen = norm(resultant);
  if (rlen < kResultantEpsilon) return 0.0;
  const Point3 rhat = resultant * (1.0 / rlen);
  double sum = 0.0;
  for (const Point3& d : dirs) sum += dot(rhat, d);
  return sum / static_cast<double>(neighbors.size());
}

namespace boundary_detail {

/// Resultant of unit neighbor directions for every tree point (tree order), accumulated once
/// per pair in single precision. Pairs whose distance is too close to the radius (or to zero)
/// to be classified reliably in float are counted as uncertain at both endpoints.
struct FastResultants {
  std::vector<float> rx, ry, rz;
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> uncertain;
};

struct PairKernelArgs {
  const float* __restrict x;
  const float* __restrict y;
  const float* __restrict z;
  float* __restrict rx;
  float* __restrict ry;
  float* __restrict rz;
  float* __restrict count;
  float* __restrict flag;
  float r2, band_lo, band_hi, tiny;
  float guard;  ///< keeps the reciprocal finite for coincident points
};

// Adds the unit direction p->q to R(p) and subtracts it from R(q) for every q in [first, end)
// within the radius. Branch-free so the loop vectorizes.
inline void pair_kernel(const PairKernelArgs& k, std::uint32_t p, std::uint32_t first, std::uint32_t end) {
  const float* __restrict X = k.x;
  const float* __restrict Y = k.y;
  const float* __restrict Z = k.z;
  float* __restrict RX = k.rx;
  float* __restrict RY = k.ry;
  float* __restrict RZ = k.rz;
  float* __restrict K = k.count;
  float* __restrict F = k.flag;
  const float px = X[p], py = Y[p], pz = Z[p];
  const float r2 = k.r2, band_lo = k.band_lo, band_hi = k.band_hi, tiny = k.tiny, guard = k.guard;
  float sx = 0.f, sy = 0.f, sz = 0.f, cnt = 0.f, unsure = 0.f;
#pragma omp simd reduction(+ : sx, sy, sz, cnt, unsure)
  for (std::uint32_t q = first; q < end; ++q) {
    const float dx = X[q] - px, dy = Y[q] - py, dz = Z[q] - pz;
    const float d2 = dx * dx + dy * dy + dz * dz;
    const float in = static_cast<float>(d2 <= r2) * static_cast<float>(d2 > 0.f);
    const float edge =
        static_cast<float>(d2 > band_lo) * static_cast<float>(d2 < band_hi) + static_cast<float>(d2 < tiny);
    const float inv = in / std::sqrt(d2 + guard);
    const float ux = dx * inv, uy = dy * inv, uz = dz * inv;
    sx += ux;
    sy += uy;
    sz += uz;
    cnt += in;
    unsure += edge;
    RX[q] -= ux;
    RY[q] -= uy;
    RZ[q] -= uz;
    K[q] += in;
    F[q] += edge;
  }
  RX[p] += sx;
  RY[p] += sy;
  RZ[p] += sz;
  K[p] += cnt;
  F[p] += unsure;
}

// For each leaf, the leaf itself and every later leaf within reach are gathered into
// contiguous buffers so the kernel runs over long spans; the partial sums are then added back.
inline FastResultants accumulate_resultants(const KdTree& tree, double radius) {
  const std::size_t n = tree.size();
  const auto& pts = tree.points();
  std::vector<float> gx(n), gy(n), gz(n), grx(n, 0.f), gry(n, 0.f), grz(n, 0.f), gcount(n, 0.f), gflag(n, 0.f);
  for (std::size_t i = 0; i < n; ++i) {
    gx[i] = static_cast<float>(pts[i].x);
    gy[i] = static_cast<float>(pts[i].y);
    gz[i] = static_cast<float>(pts[i].z);
  }
  const float r2 = static_cast<float>(radius * radius);
  std::vector<float> x, y, z, rx, ry, rz, count, flag;
  std::vector<KdTree::Leaf> group;

  auto flush = [&]() {
    if (group.empty()) return;
    std::size_t m = 0;
    for (const auto& l : group) m += l.end - l.begin;
    for (auto* v : {&x, &y, &z}) v->resize(m);
    for (auto* v : {&rx, &ry, &rz, &count, &flag}) v->assign(m, 0.f);
    std::size_t o = 0;
    for (const auto& l : group) {
      for (std::uint32_t i = l.begin; i < l.end; ++i, ++o) {
        x[o] = gx[i];
        y[o] = gy[i];
        z[o] = gz[i];
      }
    }
    const PairKernelArgs args{x.data(),     y.data(),    z.data(), rx.data(),           ry.data(),
                              rz.data(),    count.data(), flag.data(), r2, r2 * (1.0f - 1e-4f),
                              r2 * (1.0f + 1e-4f), r2 * 1e-8f, r2 * 1e-12f};
    const auto own = group.front().end - group.front().begin;
    for (std::uint32_t p = 0; p < own; ++p) pair_kernel(args, p, p + 1, static_cast<std::uint32_t>(m));
    o = 0;
    for (const auto& l : group) {
      for (std::uint32_t i = l.begin; i < l.end; ++i, ++o) {
        grx[i] += rx[o];
        gry[i] += ry[o];
        grz[i] += rz[o];
        gcount[i] += count[o];
        gflag[i] += flag[o];
      }
    }
    group.clear();
  };

  tree.for_each_leaf_pair(radius, [&](const KdTree::Leaf&, const KdTree::Leaf& b, bool same) {
    // The first leaf reported for each `a` is `a` itself.
    if (same) flush();
    group.push_back(b);
  });
  flush();

  FastResultants out;
  out.rx = std::move(grx);
  out.ry = std::move(gry);
  out.rz = std::move(grz);
  out.count.resize(n);
  out.uncertain.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.count[i] = static_cast<std::uint32_t>(gcount[i]);
    out.uncertain[i] = static_cast<std::uint32_t>(gflag[i]);
  }
  return out;
}

/// Exact double-precision score over the tree's radius neighborhood; nullopt if too few neighbors.
inline std::optional<double> exact_score(const KdTree& tree, const Point3& p, const BoundaryParams& params) {
  std::vector<Point3> nbrs;
  tree.for_each_within(p, params.radius, [&](std::size_t, const Point3& q, double d2) {
    if (d2 > 0.0) nbrs.push_back(q);
  });
  if (nbrs.size() < params.min_neighbors) return std::nullopt;
  return boundary_score(p, nbrs);
}

}  // namespace boundary_detail

/// Flags every valid point with at least min_neighbors neighbors and score > threshold.
/// Scores come from a single-precision pass. Each uncertain pair can move the resultant by at
/// most one unit vector and the count by one, which bounds the exact score; points whose bound
/// straddles the threshold, or whose count is near min_neighbors, are rescored in double, as
/// are flagged points with any uncertain pair. Other flagged scores are within 1e-4 of exact.
inline BoundarySet detect_boundary(const CloudIndex& index, const BoundaryParams& params) {
  params.validate();
  const KdTree& tree = index.tree();
  const auto fast = boundary_detail::accumulate_resultants(tree, params.radius);
  constexpr double kScoreBand = 1e-4;
  std::vector<std::pair<std::size_t, double>> hits;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double k = fast.count[i], u = fast.uncertain[i];
    const double rx = fast.rx[i], ry = fast.ry[i], rz = fast.rz[i];
    const double rlen = std::sqrt(rx * rx + ry * ry + rz * rz);
    bool recheck = k <= u + static_cast<double>(params.min_neighbors);
    double score = 0.0;
    if (!recheck) {
      score = rlen / k;
      const double lo = (rlen - u) / (k + u) - kScoreBand;
      const double hi = (rlen + u) / (k - u) + kScoreBand;
      recheck = lo <= params.threshold && params.threshold < hi;
      // Flagged with uncertain pairs: classification is settled, the score is not.
      recheck = recheck || (u > 0.0 && score > params.threshold);
    }
    bool counted = k >= static_cast<double>(params.min_neighbors);
    if (recheck) {
      const auto exact = boundary_detail::exact_score(tree, tree.points()[i], params);
      counted = exact.has_value();
      score = exact.value_or(0.0);
    }
    if (counted && score > params.threshold) hits.emplace_back(tree.ids()[i], score);
  }
  std::sort(hits.begin(), hits.end());
  BoundarySet out;
  out.indices.reserve(hits.size());
  out.scores.reserve(hits.size());
  for (const auto& [id, s] : hits) {
    out.indices.push_back(id);
    out.scores.push_back(s);
  }
  return out;
}

inline BoundarySet detect_boundary(const OrganizedCloud& cloud, const BoundaryParams& params) {
  if (cloud.valid_count() == 0) return {};
  return detect_boundary(CloudIndex(cloud), params);
}

}  // namespace skelgrasp
