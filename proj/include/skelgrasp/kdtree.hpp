// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "skelgrasp/geometry.hpp"

namespace skelgrasp {

/// Static 3-D k-d tree with exact radius search. Points are stored in leaf-contiguous
/// order ("tree order"); callers get back the ids supplied at construction.
class KdTree {
 public:
  struct Leaf {
    std::uint32_t begin = 0;  ///< first point in tree order
    std::uint32_t end = 0;
  };

  KdTree() = default;

  KdTree(std::span<const Point3> points, std::span<const std::size_t> ids) {
    if (points.size() != ids.size()) throw DimensionError("kd-tree: points/ids size mismatch");
    std::vector<std::uint32_t> order(points.size());
    std::iota(order.begin(), order.end(), 0u);
    if (!points.empty()) build(points, order, 0, order.size());
    pts_.reserve(points.size());
    ids_.reserve(points.size());
    for (auto o : order) {
      pts_.push_back(points[o]);
      ids_.push_back(ids[o]);
    }
  }

  explicit KdTree(std::span<const Point3> points) : KdTree(points, identity(points.size())) {}

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

  /// Points and ids in tree order.
  const std::vector<Point3>& points() const { return pts_; }
  const std::vector<std::size_t>& ids() const { return ids_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }

  /// Calls fn(id, point, squared_distance) for every point with distance <= radius.
  template <typename Fn>
  void for_each_within(const Point3& q, double radius, Fn&& fn) const {
    if (nodes_.empty()) return;
    const double r2 = radius * radius;
    std::array<std::uint32_t, 128> stack{};
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& n = nodes_[stack[--top]];
      if (box_distance2(n, q) > r2) continue;
      if (n.leaf >= 0) {
        const Leaf& l = leaves_[static_cast<std::size_t>(n.leaf)];
        for (std::uint32_t i = l.begin; i < l.end; ++i) {
          const double d2 = squared_distance(pts_[i], q);
          if (d2 <= r2) fn(ids_[i], pts_[i], d2);
        }
        continue;
      }
      stack[top++] = n.right;
      stack[top++] = n.left;
    }
  }

  /// Ids within `radius` of q, ascending.
  std::vector<std::size_t> radius_search(const Point3& q, double radius) const {
    std::vector<std::size_t> out;
    for_each_within(q, radius, [&](std::size_t id, const Point3&, double) { out.push_back(id); });
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Calls fn(a, b) for every pair of leaves (a <= b) whose bounding boxes lie within
  /// `radius` of each other. Every point pair closer than `radius` lies in exactly one such
  /// leaf pair (or twice within a single leaf when a == b).
  template <typename Fn>
  void for_each_leaf_pair(double radius, Fn&& fn) const {
    const double r2 = radius * radius;
    std::vector<std::uint32_t> stack;
    for (std::size_t a = 0; a < leaves_.size(); ++a) {
      const Node& na = nodes_[leaf_node_[a]];
      stack.assign(1, 0);
      while (!stack.empty()) {
        const Node& n = nodes_[stack.back()];
        stack.pop_back();
        if (n.last_leaf < static_cast<std::int64_t>(a)) continue;
        if (box_box_distance2(n, na) > r2) continue;
        if (n.leaf >= 0) {
          fn(leaves_[a], leaves_[static_cast<std::size_t>(n.leaf)], a == static_cast<std::size_t>(n.leaf));
          continue;
        }
        stack.push_back(n.right);
        stack.push_back(n.left);
      }
    }
  }

 private:
  struct Node {
    std::array<double, 3> lo{}, hi{};
    std::uint32_t left = 0, right = 0;
    std::int32_t leaf = -1;       ///< leaf slot, or -1 for an inner node
    std::int64_t last_leaf = -1;  ///< highest leaf slot in this subtree
  };

  static constexpr std::size_t kLeafSize = 16;

  static double coord(const Point3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

  static double box_distance2(const Node& n, const Point3& q) {
    const double c[3] = {q.x, q.y, q.z};
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double g = std::max({0.0, n.lo[a] - c[a], c[a] - n.hi[a]});
      d2 += g * g;
    }
    return d2;
  }

  static double box_box_distance2(const Node& a, const Node& b) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double g = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
      d2 += g * g;
    }
    return d2;
  }

  static std::vector<std::size_t> identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
  }

  std::uint32_t build(std::span<const Point3> points, std::vector<std::uint32_t>& order, std::size_t begin,
                      std::size_t end) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Point3 lo = points[order[begin]], hi = lo;
    for (std::size_t i = begin; i < end; ++i) {
      const Point3& p = points[order[i]];
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    nodes_[id].lo = {lo.x, lo.y, lo.z};
    nodes_[id].hi = {hi.x, hi.y, hi.z};
    if (end - begin <= kLeafSize) {
      nodes_[id].leaf = static_cast<std::int32_t>(leaves_.size());
      nodes_[id].last_leaf = nodes_[id].leaf;
      leaves_.push_back({static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
      leaf_node_.push_back(id);
      return id;
    }
    const Point3 ext = hi - lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t a, std::uint32_t b) {
                       return coord(points[a], axis) < coord(points[b], axis);
                     });
    const std::uint32_t left = build(points, order, begin, mid);
    const std::uint32_t right = build(points, order, mid, end);
    Node& n = nodes_[id];
    n.left = left;
    n.right = right;
    n.last_leaf = nodes_[right].last_leaf;
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
  std::vector<std::uint32_t> leaf_node_;
  std::vector<Point3> pts_;
  std::vector<std::size_t> ids_;
};

}  // namespace skelgrasp
