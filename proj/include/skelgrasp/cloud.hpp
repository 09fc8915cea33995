// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "skelgrasp/geometry.hpp"
#include "skelgrasp/image.hpp"

namespace skelgrasp {

/// Pinhole intrinsics in pixels.
struct CameraIntrinsics {
  double fx = 525.0;
  double fy = 525.0;
  double cx = 319.5;
  double cy = 239.5;

  void validate(int width, int height) const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw Error("intrinsics: focal lengths must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
      throw Error("intrinsics: principal point outside the image");
  }

  Pixel project_nearest(const Point3& p) const;
  std::pair<double, double> project(const Point3& p) const { return {fx * p.x / p.z + cx, fy * p.y / p.z + cy}; }
};

inline Pixel CameraIntrinsics::project_nearest(const Point3& p) const {
  auto [u, v] = project(p);
  return {static_cast<int>(std::lround(u)), static_cast<int>(std::lround(v))};
}

/// H x W grid of camera-frame points registered to image pixels. Cells may be invalid;
/// invalid cells carry an explicit flag and their coordinates are never read.
class OrganizedCloud {
 public:
  OrganizedCloud() = default;
  OrganizedCloud(int width, int height)
      : width_(width), height_(height), points_(cell_count(width, height)), valid_(points_.size(), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::size_t index_of(int u, int v) const {
    check_pixel(u, v);
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(u);
  }

  /// Pixel of a cell index.
  Pixel pixel_of(std::size_t index) const {
    if (index >= points_.size()) throw RangeError("cloud index out of range");
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  /// Point registered at (u, v), or nullopt for an invalid cell.
  std::optional<Point3> point_of(int u, int v) const {
    const std::size_t i = index_of(u, v);
    if (!valid_[i]) return std::nullopt;
    return points_[i];
  }

  bool valid(std::size_t index) const { return valid_[index] != 0; }
  bool valid(int u, int v) const { return valid_[index_of(u, v)] != 0; }
  const Point3& point(std::size_t index) const { return points_[index]; }

  /// Stores `p` at (u, v); non-finite coordinates mark the cell invalid.
  void set(int u, int v, const Point3& p) {
    const std::size_t i = index_of(u, v);
    if (p.finite()) {
      points_[i] = p;
      valid_[i] = 1;
    } else {
      invalidate(u, v);
    }
  }

  void invalidate(int u, int v) {
    const std::size_t i = index_of(u, v);
    points_[i] = Point3{};
    valid_[i] = 0;
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto b : valid_) n += b;
    return n;
  }

  bool has_colors() const { return !colors_.empty(); }
  const std::vector<Rgb>& colors() const { return colors_; }
  void set_colors(std::vector<Rgb> colors) {
    if (!colors.empty() && colors.size() != points_.size()) throw DimensionError("color grid size mismatch");
    colors_ = std::move(colors);
  }

  /// Valid-cell indices in ascending order.
  std::vector<std::size_t> valid_indices() const {
    std::vector<std::size_t> out;
    out.reserve(points_.size());
    for (std::size_t i = 0; i < valid_.size(); ++i)
      if (valid_[i]) out.push_back(i);
    return out;
  }

 private:
  static std::size_t cell_count(int width, int height) {
    if (width < 0 || height < 0) throw DimensionError("negative cloud size");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  void check_pixel(int u, int v) const {
    if (u < 0 || v < 0 || u >= width_ || v >= height_) throw RangeError("pixel out of range");
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Point3> points_;
  std::vector<std::uint8_t> valid_;
  std::vector<Rgb> colors_;
};

/// Back-projects a millimeter depth image (0 = no reading) through a pinhole camera.
inline OrganizedCloud from_depth(const DepthImage& depth, const CameraIntrinsics& k, int width, int height) {
  if (depth.width() != width || depth.height() != height)
    throw DimensionError("depth image is " + std::to_string(depth.width()) + "x" + std::to_string(depth.height()) +
                         ", expected " + std::to_string(width) + "x" + std::to_string(height));
  k.validate(width, height);
  OrganizedCloud cloud(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const std::uint16_t d = depth(v, u);
      if (d == 0) continue;
      const double z = d / 1000.0;
      cloud.set(u, v, {(u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z});
    }
  }
  return cloud;
}

inline OrganizedCloud from_depth(const DepthImage& depth, const CameraIntrinsics& k) {
  return from_depth(depth, k, depth.width(), depth.height());
}

/// Millimeter depth image of a cloud; invalid cells and depths outside (0, 65.535 m] become 0.
inline DepthImage to_depth(const OrganizedCloud& cloud) {
  DepthImage out(cloud.width(), cloud.height());
  for (int v = 0; v < cloud.height(); ++v) {
    for (int u = 0; u < cloud.width(); ++u) {
      const auto p = cloud.point_of(u, v);
      if (!p) continue;
      const double mm = std::round(p->z * 1000.0);
      if (mm >= 1.0 && mm <= 65535.0) out(v, u) = static_cast<std::uint16_t>(mm);
    }
  }
  return out;
}

/// Rotates an organized cloud by +90 degrees in the image plane (x right, y down):
/// pixel (u, v) moves to (H-1-v, u) and point (x, y, z) becomes (-y, x, z).
inline OrganizedCloud rotate_quarter_turn(const OrganizedCloud& in) {
  OrganizedCloud out(in.height(), in.width());
  for (int v = 0; v < in.height(); ++v)
    for (int u = 0; u < in.width(); ++u)
      if (auto p = in.point_of(u, v)) out.set(in.height() - 1 - v, u, {-p->y, p->x, p->z});
  return out;
}

}  // namespace skelgrasp
