// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "skelgrasp/skeleton.hpp"

using namespace skelgrasp;

namespace {

constexpr double kPi = std::numbers::pi;

BinaryImage rect_mask(int w, int h, int r0, int c0, int rows, int cols) {
  BinaryImage m(w, h);
  for (int r = r0; r < r0 + rows; ++r)
    for (int c = c0; c < c0 + cols; ++c) m(r, c) = 1;
  return m;
}

BinaryImage disk_mask(int w, int h, double cr, double cc, double rad) {
  BinaryImage m(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) m(r, c) = std::hypot(r - cr, c - cc) <= rad;
  return m;
}

BinaryImage l_mask() {
  BinaryImage m(70, 70);
  for (int r = 5; r < 65; ++r)
    for (int c = 5; c < 65; ++c) m(r, c) = (r < 20) || (c < 20);
  return m;
}

BinaryImage random_blob(std::mt19937& rng) {
  BinaryImage m(50, 40);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    const double cr = 8 + 24 * uni(rng), cc = 8 + 34 * uni(rng), rad = 3 + 6 * uni(rng);
    for (int r = 0; r < 40; ++r)
      for (int c = 0; c < 50; ++c)
        if (std::hypot(r - cr, c - cc) <= rad) m(r, c) = 1;
  }
  return m;
}

// Principal direction of the window's scatter, as dr/dc, from an eigen decomposition.
double eigen_tan(const std::vector<Pixel>& px) {
  Eigen::MatrixXd x(px.size(), 2);
  for (std::size_t i = 0; i < px.size(); ++i) x.row(i) << px[i].u, px[i].v;
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::Matrix2d cov = centered.transpose() * centered;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d v = es.eigenvectors().col(1);
  return v.y() / v.x();
}

}  // namespace

TEST(Skeleton, ContainedInMask) {
  std::mt19937 rng(2);
  std::vector<BinaryImage> fixtures{rect_mask(90, 30, 4, 4, 21, 81), disk_mask(60, 60, 30, 30, 20), l_mask(),
                                    rect_mask(10, 10, 0, 0, 10, 10)};
  for (int k = 0; k < 20; ++k) fixtures.push_back(random_blob(rng));
  for (const auto& m : fixtures) {
    const auto s = skeletonize(m);
    ASSERT_FALSE(s.empty());
    for (const Pixel& p : s.pixels) EXPECT_TRUE(m(p.v, p.u));
    EXPECT_EQ(count_set(s.bits), s.size());
  }
}

// The ridge of the distance transform of a 21 x 81 rectangle is its central row.
TEST(Skeleton, RectangleSkeletonFollowsRidge) {
  const int r0 = 4, c0 = 4;
  const auto m = rect_mask(90, 30, r0, c0, 21, 81);
  const auto s = skeletonize(m);
  auto dist_to_background = [&](int r, int c) {
    double best = 1e9;
    for (int rr = 0; rr < m.height(); ++rr)
      for (int cc = 0; cc < m.width(); ++cc)
        if (!m(rr, cc)) best = std::min(best, std::hypot(rr - r, cc - c));
    return best;
  };
  for (int c = c0 + 10; c < c0 + 71; c += 10) {
    int ridge = -1;
    double best = -1;
    for (int r = r0; r < r0 + 21; ++r) {
      const double d = dist_to_background(r, c);
      if (d > best) {
        best = d;
        ridge = r;
      }
    }
    EXPECT_EQ(ridge, r0 + 10);
  }
  int central = 0;
  for (const Pixel& p : s.pixels) {
    if (p.u < c0 + 10 || p.u >= c0 + 70) continue;
    ++central;
    EXPECT_LE(std::abs(p.v - (r0 + 10)), 2);
  }
  EXPECT_GE(central, 60);
}

TEST(Skeleton, QuarterTurnCommutes) {
  std::mt19937 rng(5);
  for (int k = 0; k < 5; ++k) {
    const auto m = random_blob(rng);
    BinaryImage rot(m.height(), m.width());
    for (int r = 0; r < m.height(); ++r)
      for (int c = 0; c < m.width(); ++c) rot(c, m.height() - 1 - r) = m(r, c);
    const auto a = skeletonize(m), b = skeletonize(rot);
    for (int r = 0; r < m.height(); ++r)
      for (int c = 0; c < m.width(); ++c) ASSERT_EQ(a.bits(r, c), b.bits(c, m.height() - 1 - r));
  }
}

TEST(Skeleton, EmptyMaskThrows) { EXPECT_THROW(skeletonize(BinaryImage(5, 5)), Error); }

TEST(LocalWindow, MatchesLinearScan) {
  Skeleton s;
  s.bits = BinaryImage(40, 40);
  for (int c = 5; c < 35; ++c) s.pixels.push_back({c, 20});
  for (int r = 5; r < 35; ++r)
    if (r != 20) s.pixels.push_back({20, r});
  for (const Pixel& p : s.pixels) s.bits(p.v, p.u) = 1;
  for (const Pixel q : {Pixel{20, 20}, Pixel{26, 14}, Pixel{5, 20}, Pixel{0, 0}}) {
    auto got = local_window(s, q, 8.0);
    std::vector<Pixel> want;
    for (const Pixel& p : s.pixels)
      if (std::hypot(p.u - q.u, p.v - q.v) <= 8.0) want.push_back(p);
    auto key = [](const Pixel& a, const Pixel& b) { return a.v != b.v ? a.v < b.v : a.u < b.u; };
    std::sort(got.begin(), got.end(), key);
    std::sort(want.begin(), want.end(), key);
    EXPECT_EQ(got, want);
  }
  EXPECT_THROW(local_window(s, {0, 0}, 0.0), Error);
}

TEST(FitSlope, DegenerateFixtures) {
  const std::vector<Pixel> horizontal{{0, 5}, {1, 5}, {2, 5}, {3, 5}};
  const std::vector<Pixel> vertical{{7, 0}, {7, 1}, {7, 2}};
  const std::vector<Pixel> diagonal{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(fit_slope(horizontal).slope, 0.0);
  EXPECT_EQ(fit_slope(horizontal).b, 0.0);
  EXPECT_EQ(fit_slope(vertical).slope, kPi / 2);
  EXPECT_TRUE(std::isinf(fit_slope(vertical).b));
  EXPECT_EQ(fit_slope(diagonal).slope, kPi / 4);
  const std::vector<Pixel> anti{{0, 3}, {1, 2}, {2, 1}, {3, 0}};
  EXPECT_EQ(fit_slope(anti).slope, -kPi / 4);
}

TEST(FitSlope, Errors) {
  EXPECT_THROW(fit_slope(std::vector<Pixel>{{1, 1}}), Error);
  EXPECT_THROW(fit_slope(std::vector<Pixel>{{1, 1}, {1, 1}}), Error);
}

TEST(FitSlope, SumsNotMeans) {
  const std::vector<Pixel> px{{0, 0}, {2, 1}, {4, 1}, {6, 3}};
  const auto s = fit_slope(px);
  EXPECT_DOUBLE_EQ(s.mu_c, 3.0);
  EXPECT_DOUBLE_EQ(s.mu_r, 1.25);
  EXPECT_DOUBLE_EQ(s.sigma_c, 9 + 1 + 1 + 9);
  EXPECT_DOUBLE_EQ(s.sigma_r, 1.5625 + 0.0625 + 0.0625 + 3.0625);
  EXPECT_DOUBLE_EQ(s.sigma_rc, 3 * 1.25 + 1 * 0.25 - 1 * 0.25 + 3 * 1.75);
}

TEST(FitSlope, MatchesEigenvectorOnRandomWindows) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Pixel> px;
    const double a = uni(rng) * kPi;
    const int n = 3 + static_cast<int>(uni(rng) * 30);
    for (int i = 0; i < n; ++i) {
      const double s = (uni(rng) - 0.5) * 30, j = (uni(rng) - 0.5) * 4;
      px.push_back({static_cast<int>(std::lround(s * std::cos(a) - j * std::sin(a))),
                    static_cast<int>(std::lround(s * std::sin(a) + j * std::cos(a)))});
    }
    LineFitStats f;
    try {
      f = fit_slope(px);
    } catch (const Error&) {
      continue;
    }
    if (f.sigma_rc == 0.0) continue;
    const double want = eigen_tan(px);
    ASSERT_NEAR(std::tan(f.slope), want, 1e-9 * std::max(1.0, std::abs(want))) << t;
    ASSERT_NEAR(f.b, want, 1e-9 * std::max(1.0, std::abs(want))) << t;
  }
}

TEST(FitSlope, TransposeMapsToComplement) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> pos(0, 20);
  for (int t = 0; t < 200; ++t) {
    std::vector<Pixel> px, tr;
    for (int i = 0; i < 8; ++i) {
      px.push_back({pos(rng), pos(rng)});
      tr.push_back({px.back().v, px.back().u});
    }
    const auto f = fit_slope(px), g = fit_slope(tr);
    if (f.sigma_rc == 0.0) continue;
    EXPECT_NEAR(std::sin(2 * g.slope), std::sin(2 * (kPi / 2 - f.slope)), 1e-12);
    EXPECT_NEAR(std::cos(2 * g.slope), std::cos(2 * (kPi / 2 - f.slope)), 1e-12);
  }
}

TEST(RectanglesFor, HorizontalBarGivesVerticalFingers) {
  const auto m = rect_mask(80, 20, 8, 10, 5, 60);
  const auto s = skeletonize(m);
  const auto rects = rectangles_for(s, RectangleGeometry{}, 15.0);
  ASSERT_EQ(rects.size(), s.size());
  for (const auto& r : rects) {
    EXPECT_EQ(r.alpha, kPi / 2);
    EXPECT_EQ(r.length, 80.0);
    EXPECT_EQ(r.width, 20.0);
  }
}

TEST(RectanglesFor, PerpendicularToLocalSkeleton) {
  const auto s = skeletonize(l_mask());
  const auto rects = rectangles_for(s, RectangleGeometry{40, 10}, 10.0);
  ASSERT_FALSE(rects.empty());
  for (const auto& r : rects) {
    const auto fit = fit_slope(local_window(s, {static_cast<int>(r.x), static_cast<int>(r.y)}, 10.0));
    EXPECT_NEAR(std::cos(r.alpha) * std::cos(fit.slope) + std::sin(r.alpha) * std::sin(fit.slope), 0.0, 1e-12);
  }
}

TEST(RectanglesFor, IsolatedPixelHasNoWindow) {
  const auto s = skeletonize(rect_mask(9, 9, 4, 4, 1, 1));
  EXPECT_TRUE(rectangles_for(s, RectangleGeometry{}, 3.0).empty());
  EXPECT_THROW(rectangles_for(s, RectangleGeometry{10, 20}, 3.0), Error);
}
