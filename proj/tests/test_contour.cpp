// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "skelgrasp/contour.hpp"
#include "skelgrasp/scenegen.hpp"
#include "skelgrasp/segmentation.hpp"

using namespace skelgrasp;

namespace {

constexpr double kStep = 0.01;

OrganizedCloud row_cloud(const std::vector<Point3>& pts) {
  OrganizedCloud c(static_cast<int>(pts.size()), 1);
  for (std::size_t i = 0; i < pts.size(); ++i) c.set(static_cast<int>(i), 0, pts[i]);
  return c;
}

BoundarySet all_of(const OrganizedCloud& c) {
  BoundarySet b;
  b.indices = c.valid_indices();
  b.scores.assign(b.indices.size(), 1.0);
  return b;
}

// Perimeter of an n x n lattice with spacing kStep, listed once around starting at a corner.
std::vector<Point3> square_ring(int n, double x0, double y0, double z) {
  std::vector<Point3> pts;
  for (int i = 0; i < n - 1; ++i) pts.push_back({x0 + i * kStep, y0, z});
  for (int i = 0; i < n - 1; ++i) pts.push_back({x0 + (n - 1) * kStep, y0 + i * kStep, z});
  for (int i = n - 1; i > 0; --i) pts.push_back({x0 + i * kStep, y0 + (n - 1) * kStep, z});
  for (int i = n - 1; i > 0; --i) pts.push_back({x0, y0 + i * kStep, z});
  return pts;
}

std::vector<std::size_t> iota_n(std::size_t n, std::size_t first = 0) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), first);
  return v;
}

}  // namespace

TEST(TraceContour, SquareRingOfEight) {
  const auto c = row_cloud(square_ring(3, 0, 0, 1));
  ASSERT_EQ(c.size(), 8u);
  const auto contour = trace_closed_contour(all_of(c), c, 0.011);
  EXPECT_TRUE(contour.closed);
  EXPECT_EQ(contour.ordered, iota_n(8));
}

// Ring of 20 lattice points; index 20 is a spur 8 mm outside ring point 3. From point 3 the spur
// (8 mm) beats point 4 (10 mm); from the spur nothing is left within 11 mm (point 4 is 12.8 mm
// away), so it is popped and the walk resumes at point 3. The ring closes from point 19.
TEST(TraceContour, SpurIsPoppedByBacktracking) {
  auto pts = square_ring(6, 0, 0, 1);
  ASSERT_EQ(pts.size(), 20u);
  pts.push_back({3 * kStep, -0.008, 1});
  const auto c = row_cloud(pts);
  ContourTracer tracer(all_of(c), c, 0.011);
  const auto r = tracer.trace();
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->contour.closed);
  EXPECT_EQ(r->contour.ordered, iota_n(20));
  EXPECT_NE(std::find(r->consumed.begin(), r->consumed.end(), 20u), r->consumed.end());
  EXPECT_EQ(tracer.remaining(), 0u);
}

TEST(TraceContour, StartsOnTheNearerOfTwoRings) {
  auto far = square_ring(4, 0, 0, 1.0);
  const auto near = square_ring(4, 0.2, 0, 0.9);
  far.insert(far.end(), near.begin(), near.end());
  const auto c = row_cloud(far);
  const auto contour = trace_closed_contour(all_of(c), c, 0.011);
  EXPECT_TRUE(contour.closed);
  // Offset coordinates are inexact, so the direction around the ring is not pinned.
  ASSERT_EQ(contour.size(), 12u);
  EXPECT_EQ(contour.ordered.front(), 12u);
  auto sorted = contour.ordered;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, iota_n(12, 12));

  const auto loops = trace_all_contours(all_of(c), c, 0.011);
  ASSERT_EQ(loops.size(), 2u);
  EXPECT_EQ(loops[1].ordered, iota_n(12));
}

TEST(TraceContour, OpenChainReturnsLongestWalk) {
  std::vector<Point3> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({i * kStep, 0, 1});
  const auto c = row_cloud(pts);
  const auto contour = trace_closed_contour(all_of(c), c, 0.011);
  EXPECT_FALSE(contour.closed);
  EXPECT_EQ(contour.ordered, iota_n(5));
}

TEST(TraceContour, SingletonsGiveOpenLengthOne) {
  const auto c = row_cloud({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}});
  const auto contour = trace_closed_contour(all_of(c), c, 0.02);
  EXPECT_FALSE(contour.closed);
  EXPECT_EQ(contour.size(), 1u);
  EXPECT_TRUE(trace_all_contours(all_of(c), c, 0.02).empty());
}

TEST(TraceContour, Errors) {
  const auto c = row_cloud({{0, 0, 1}});
  EXPECT_THROW(trace_closed_contour(BoundarySet{}, c, 0.02), Error);
  EXPECT_THROW(trace_closed_contour(all_of(c), c, 0.0), Error);
  BoundarySet bad;
  bad.indices = {5};
  bad.scores = {1.0};
  EXPECT_THROW(trace_closed_contour(bad, c, 0.02), RangeError);
}

// A two-point back-and-forth never counts as a loop.
TEST(TraceContour, NoTwoCycles) {
  const auto c = row_cloud({{0, 0, 1}, {0.005, 0, 1}});
  const auto contour = trace_closed_contour(all_of(c), c, 0.02);
  EXPECT_FALSE(contour.closed);
}

TEST(TraceContour, ConvexSilhouetteVisitsEveryPoint) {
  for (int n : {24, 60, 157}) {
    const double radius = 0.05, spacing = 2 * radius * std::sin(std::numbers::pi / n);
    std::vector<Point3> pts;
    for (int k = 0; k < n; ++k) {
      const double a = 2 * std::numbers::pi * k / n;
      pts.push_back({radius * std::cos(a), radius * std::sin(a), 0.7 + 0.01 * std::sin(a)});
    }
    const auto c = row_cloud(pts);
    const double link = 2.2 * spacing;
    const auto contour = trace_closed_contour(all_of(c), c, link);
    EXPECT_TRUE(contour.closed) << n;
    EXPECT_EQ(contour.size(), static_cast<std::size_t>(n)) << n;
  }
}

TEST(TraceContour, InvariantsOnRenderedEdges) {
  SceneSpec s;
  s.noise_sigma = 0.002;
  s.seed = 3;
  s = clutter(s, 4, 3);
  const auto scene = render(s);
  const auto edges = silhouette_edges(detect_boundary(scene.cloud, BoundaryParams{}), scene.cloud, 0.02);
  ContourTracer tracer(edges, scene.cloud, 0.02);
  std::set<std::size_t> used;
  std::size_t consumed = 0;
  while (auto r = tracer.trace()) {
    const auto& o = r->contour.ordered;
    ASSERT_FALSE(o.empty());
    for (auto i : o) EXPECT_TRUE(used.insert(i).second) << "point reused";
    if (r->contour.closed) {
      EXPECT_GE(o.size(), 3u);
      EXPECT_LE(std::sqrt(squared_distance(scene.cloud.point(o.back()), scene.cloud.point(o.front()))), 0.02);
    }
    for (std::size_t k = 1; k < o.size(); ++k)
      EXPECT_LE(std::sqrt(squared_distance(scene.cloud.point(o[k - 1]), scene.cloud.point(o[k]))), 0.02);
    consumed += r->consumed.size();
  }
  EXPECT_EQ(consumed, edges.size());
  EXPECT_EQ(tracer.remaining(), 0u);
}

TEST(TraceContour, Deterministic) {
  SceneSpec s;
  s.seed = 9;
  s = clutter(s, 3, 9);
  const auto scene = render(s);
  const auto edges = silhouette_edges(detect_boundary(scene.cloud, BoundaryParams{}), scene.cloud, 0.02);
  const auto a = trace_all_contours(edges, scene.cloud, 0.02);
  const auto b = trace_all_contours(edges, scene.cloud, 0.02);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ordered, b[i].ordered);
}

TEST(SilhouetteEdges, KeepsOnlyDepthSteps) {
  OrganizedCloud c(5, 1);
  for (int u = 0; u < 5; ++u) c.set(u, 0, {0.01 * u, 0, u < 3 ? 0.7 : 0.8});
  BoundarySet b = all_of(c);
  const auto e = silhouette_edges(b, c, 0.02);
  EXPECT_EQ(e.indices, (std::vector<std::size_t>{2, 3}));
  c.invalidate(0, 0);
  b = all_of(c);
  EXPECT_EQ(silhouette_edges(b, c, 0.02).indices, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(silhouette_edges(b, c, 0.0), Error);
}

TEST(ContourPixels, IdentityGridAndEmpty) {
  OrganizedCloud c(4, 3);
  for (int v = 0; v < 3; ++v)
    for (int u = 0; u < 4; ++u) c.set(u, v, {double(u), double(v), 1});
  Contour k;
  k.ordered = {0, 5, 11, 6};
  EXPECT_EQ(contour_pixels(k, c), (std::vector<Pixel>{{0, 0}, {1, 1}, {3, 2}, {2, 1}}));
  EXPECT_TRUE(contour_pixels(Contour{}, c).empty());
}

TEST(ContourPixels, BoxSilhouetteWithinTwoPixels) {
  SceneSpec s;
  s.noise_sigma = 0.0;
  SceneObject box;
  box.dims = {0.10, 0.10, 0.05, 0.04, 0.04};
  s.objects = {box};
  const auto scene = render(s);
  const auto edges = silhouette_edges(detect_boundary(scene.cloud, BoundaryParams{}), scene.cloud, 0.02);
  const auto loops = trace_all_contours(edges, scene.cloud, 0.02);
  ASSERT_FALSE(loops.empty());
  const BinaryImage& m = scene.truth.masks[0];
  // Silhouette pixels: mask pixels with a 4-neighbor outside the mask.
  std::vector<Pixel> sil;
  for (int v = 1; v + 1 < m.height(); ++v)
    for (int u = 1; u + 1 < m.width(); ++u)
      if (m(v, u) && (!m(v - 1, u) || !m(v + 1, u) || !m(v, u - 1) || !m(v, u + 1))) sil.push_back({u, v});
  for (const Pixel& p : contour_pixels(loops[0], scene.cloud)) {
    double best = 1e9;
    for (const Pixel& q : sil) best = std::min(best, std::hypot(p.u - q.u, p.v - q.v));
    EXPECT_LE(best, 2.0);
  }
}
