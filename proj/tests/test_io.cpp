// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

#include "skelgrasp/cloud.hpp"
#include "skelgrasp/pcd_io.hpp"
#include "skelgrasp/png_io.hpp"

using namespace skelgrasp;

namespace {

OrganizedCloud sample_cloud() {
  OrganizedCloud c(4, 3);
  for (int v = 0; v < 3; ++v)
    for (int u = 0; u < 4; ++u) c.set(u, v, {0.1 * u - 0.123456789012345, -0.2 * v + 1e-7, 0.8 + u * 1e-3 + v / 3.0});
  c.invalidate(2, 1);
  return c;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("skelgrasp_io_" + name);
}

}  // namespace

TEST(Cloud, IndexingAndValidity) {
  const auto c = sample_cloud();
  EXPECT_EQ(c.size(), 12u);
  EXPECT_EQ(c.valid_count(), 11u);
  EXPECT_EQ(c.index_of(3, 2), 11u);
  EXPECT_EQ(c.pixel_of(6), (Pixel{2, 1}));
  EXPECT_FALSE(c.point_of(2, 1).has_value());
  EXPECT_THROW(c.index_of(4, 0), RangeError);
  EXPECT_THROW(c.pixel_of(12), RangeError);
}

TEST(Cloud, NonFinitePointInvalidates) {
  OrganizedCloud c(2, 1);
  c.set(0, 0, {0, 0, std::numeric_limits<double>::quiet_NaN()});
  c.set(1, 0, {0, 0, 1});
  EXPECT_FALSE(c.valid(0, 0));
  EXPECT_TRUE(c.valid(1, 0));
}

TEST(Cloud, DepthRoundTrip) {
  const CameraIntrinsics k{500.0, 510.0, 2.0, 1.5};
  DepthImage d(5, 4);
  for (int v = 0; v < 4; ++v)
    for (int u = 0; u < 5; ++u) d(v, u) = static_cast<std::uint16_t>(700 + 10 * u + v);
  d(1, 1) = 0;
  const auto cloud = from_depth(d, k);
  EXPECT_FALSE(cloud.valid(1, 1));
  const auto p = *cloud.point_of(4, 3);
  EXPECT_DOUBLE_EQ(p.z, 0.743);
  EXPECT_DOUBLE_EQ(p.x, (4 - 2.0) * 0.743 / 500.0);
  EXPECT_DOUBLE_EQ(p.y, (3 - 1.5) * 0.743 / 510.0);
  EXPECT_EQ(to_depth(cloud), d);
  EXPECT_THROW(from_depth(d, k, 6, 4), DimensionError);
}

TEST(Cloud, QuarterTurnMapsPixelsAndPoints) {
  const auto c = sample_cloud();
  const auto r = rotate_quarter_turn(c);
  ASSERT_EQ(r.width(), 3);
  ASSERT_EQ(r.height(), 4);
  for (int v = 0; v < 3; ++v) {
    for (int u = 0; u < 4; ++u) {
      const auto a = c.point_of(u, v);
      const auto b = r.point_of(2 - v, u);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) EXPECT_EQ(*b, (Point3{-a->y, a->x, a->z}));
    }
  }
}

TEST(Geometry, NormalizeHalfTurn) {
  constexpr double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(normalize_half_turn(pi / 2), pi / 2);
  EXPECT_DOUBLE_EQ(normalize_half_turn(-pi / 2), pi / 2);
  EXPECT_NEAR(normalize_half_turn(pi), 0.0, 1e-15);
  EXPECT_NEAR(normalize_half_turn(3 * pi / 4), -pi / 4, 1e-15);
  for (double a = -10.0; a < 10.0; a += 0.37) {
    const double n = normalize_half_turn(a);
    EXPECT_GT(n, -pi / 2);
    EXPECT_LE(n, pi / 2);
    EXPECT_NEAR(std::sin(2 * n), std::sin(2 * a), 1e-12);
  }
}

TEST(Pcd, RoundTripIsExact) {
  auto c = sample_cloud();
  std::vector<Rgb> colors(c.size());
  for (std::size_t i = 0; i < colors.size(); ++i) colors[i] = {static_cast<std::uint8_t>(i), 7, 200};
  c.set_colors(colors);
  std::stringstream ss;
  write_pcd(ss, c);
  const auto back = read_pcd(ss);
  ASSERT_EQ(back.width(), 4);
  ASSERT_EQ(back.height(), 3);
  for (std::size_t i = 0; i < c.size(); ++i) {
    ASSERT_EQ(back.valid(i), c.valid(i));
    if (c.valid(i)) EXPECT_EQ(back.point(i), c.point(i));
  }
  EXPECT_EQ(back.colors(), colors);
}

TEST(Pcd, RejectsMalformedInput) {
  std::stringstream missing("FIELDS x y z\nWIDTH 2\nHEIGHT 1\nPOINTS 2\nDATA ascii\n0 0 1\n");
  EXPECT_THROW(read_pcd(missing), ParseError);
  std::stringstream binary("FIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\nWIDTH 1\nHEIGHT 1\nPOINTS 1\nDATA binary\n");
  EXPECT_THROW(read_pcd(binary), ParseError);
  std::stringstream bad("FIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\nWIDTH 1\nHEIGHT 1\nPOINTS 1\nDATA ascii\n0 zero 1\n");
  EXPECT_THROW(read_pcd(bad), ParseError);
}

TEST(Png, DepthAndMaskRoundTrip) {
  DepthImage d(7, 5);
  for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = static_cast<std::uint16_t>(i * 997 % 65536);
  const auto dp = temp_path("depth.png").string();
  write_depth_png(dp, d);
  EXPECT_EQ(read_depth_png(dp), d);

  BinaryImage m(6, 4);
  m(1, 2) = m(3, 5) = m(0, 0) = 1;
  const auto mp = temp_path("mask.png").string();
  write_mask_png(mp, m);
  EXPECT_EQ(read_mask_png(mp), m);
  std::filesystem::remove(dp);
  std::filesystem::remove(mp);
  EXPECT_THROW(read_depth_png(temp_path("does_not_exist.png").string()), Error);
}
