// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "skelgrasp/image.hpp"
#include "skelgrasp/segmentation.hpp"

namespace skelgrasp {

/// Skeleton pixels in (row, col) order, plus the same set as an image for lookups.
struct Skeleton {
  std::vector<Pixel> pixels;
  BinaryImage bits;

  std::size_t size() const { return pixels.size(); }
  bool empty() const { return pixels.empty(); }
};

/// Orthogonal-regression statistics of a pixel window. sigma_* are sums of squared deviations.
struct LineFitStats {
  std::size_t n = 0;
  double mu_r = 0.0;
  double mu_c = 0.0;
  double sigma_r = 0.0;
  double sigma_c = 0.0;
  double sigma_rc = 0.0;
  double b = 0.0;      ///< fitted dr/dc; infinite for a vertical line
  double slope = 0.0;  ///< angle from the column axis, rows pointing down, in (-pi/2, pi/2]
};

/// Gripper footprint in the image. `alpha` is the direction of finger travel, measured like a
/// slope: from the column axis toward increasing rows.
struct GraspRectangle {
  double x = 0.0;  ///< center column
  double y = 0.0;  ///< center row
  double alpha = 0.0;
  double length = 80.0;  ///< maximum finger opening (pixels)
  double width = 20.0;   ///< finger thickness (pixels)

  /// Unit vector along the finger-travel axis, (dx, dy) in (column, row).
  double axis_x() const { return std::cos(alpha); }
  double axis_y() const { return std::sin(alpha); }
};

struct RectangleGeometry {
  double length = 80.0;
  double width = 20.0;

  void validate() const {
    if (!(width > 0.0) || !(length > width)) throw Error("rectangle geometry: need length > width > 0");
  }
};

namespace skeleton_detail {

// Binary erosion/dilation with the 3x3 cross on a window; pixels outside count as background.
inline void erode_cross(const BinaryImage& in, BinaryImage& out) {
  const int h = in.height(), w = in.width();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out(r, c) = in(r, c) && r > 0 && in(r - 1, c) && r + 1 < h && in(r + 1, c) && c > 0 && in(r, c - 1) &&
                          c + 1 < w && in(r, c + 1)
                      ? 1
                      : 0;
    }
  }
}

inline void dilate_cross(const BinaryImage& in, BinaryImage& out) {
  const int h = in.height(), w = in.width();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out(r, c) = in(r, c) || (r > 0 && in(r - 1, c)) || (r + 1 < h && in(r + 1, c)) || (c > 0 && in(r, c - 1)) ||
                          (c + 1 < w && in(r, c + 1))
                      ? 1
                      : 0;
    }
  }
}

}  // namespace skeleton_detail

/// Morphological skeleton with a 3x3 cross: repeatedly erode, and keep what the opening of each
/// stage removes. Works on the mask's bounding box padded by one pixel.
inline Skeleton skeletonize(const BinaryImage& mask) {
  int r0 = mask.height(), r1 = -1, c0 = mask.width(), c1 = -1;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  Skeleton out;
  out.bits = BinaryImage(mask.width(), mask.height());
  if (r1 < 0) throw Error("skeletonize: empty mask");
  r0 = std::max(0, r0 - 1);
  c0 = std::max(0, c0 - 1);
  r1 = std::min(mask.height() - 1, r1 + 1);
  c1 = std::min(mask.width() - 1, c1 + 1);
  const int h = r1 - r0 + 1, w = c1 - c0 + 1;
  BinaryImage cur(w, h), eroded(w, h), opened(w, h), skel(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) cur(r, c) = mask(r + r0, c + c0) ? 1 : 0;
  bool any = true;
  while (any) {
    skeleton_detail::erode_cross(cur, eroded);
    skeleton_detail::dilate_cross(eroded, opened);
    any = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur.data()[i] && !opened.data()[i]) skel.data()[i] = 1;
      any = any || eroded.data()[i];
    }
    std::swap(cur, eroded);
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!skel(r, c)) continue;
      out.bits(r + r0, c + c0) = 1;
      out.pixels.push_back({c + c0, r + r0});
    }
  }
  return out;
}

inline Skeleton skeletonize(const ObjectMask& mask) { return skeletonize(mask.bits); }

/// Skeleton pixels within Euclidean distance `radius` of q (q included when it is on the skeleton).
inline std::vector<Pixel> local_window(const Skeleton& skeleton, Pixel q, double radius) {
  if (!(radius > 0.0)) throw Error("local_window: radius must be positive");
  std::vector<Pixel> out;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int dv = -reach; dv <= reach; ++dv) {
    for (int du = -reach; du <= reach; ++du) {
      if (static_cast<double>(du * du + dv * dv) > r2) continue;
      const int u = q.u + du, v = q.v + dv;
      if (skeleton.bits.contains(v, u) && skeleton.bits(v, u)) out.push_back({u, v});
    }
  }
  return out;
}

/// Orthogonal (total least squares) line through the pixels.
inline LineFitStats fit_slope(std::span<const Pixel> window) {
  if (window.size() < 2) throw Error("fit_slope: need at least two pixels");
  LineFitStats s;
  s.n = window.size();
  for (const Pixel& p : window) {
    s.mu_r += p.v;
    s.mu_c += p.u;
  }
  s.mu_r /= static_cast<double>(s.n);
  s.mu_c /= static_cast<double>(s.n);
  for (const Pixel& p : window) {
    const double dr = p.v - s.mu_r, dc = p.u - s.mu_c;
    s.sigma_r += dr * dr;
    s.sigma_c += dc * dc;
    s.sigma_rc += dr * dc;
  }
  if (s.sigma_r == 0.0 && s.sigma_c == 0.0) throw Error("fit_slope: all pixels coincide");
  constexpr double half_pi = std::numbers::pi / 2;
  if (s.sigma_rc == 0.0) {
    if (s.sigma_c >= s.sigma_r) {
      s.b = 0.0;
      s.slope = 0.0;
    } else {
      s.b = std::numeric_limits<double>::infinity();
      s.slope = half_pi;
    }
    return s;
  }
  const double d = s.sigma_r - s.sigma_c;
  const double root = std::sqrt(d * d + 4.0 * s.sigma_rc * s.sigma_rc);
  // Same value as (d + root) / (2 sigma_rc); the second form avoids cancellation when d < 0.
  s.b = d >= 0.0 ? (d + root) / (2.0 * s.sigma_rc) : (2.0 * s.sigma_rc) / (root - d);
  s.slope = normalize_half_turn(std::atan(s.b));
  return s;
}

/// One rectangle per skeleton pixel whose window holds at least two pixels; fingers close
/// across the local skeleton direction. Output follows the skeleton's (row, col) order.
inline std::vector<GraspRectangle> rectangles_for(const Skeleton& skeleton, const RectangleGeometry& geom,
                                                  double window_radius) {
  geom.validate();
  std::vector<GraspRectangle> out;
  for (const Pixel& q : skeleton.pixels) {
    const auto window = local_window(skeleton, q, window_radius);
    if (window.size() < 2) continue;
    const LineFitStats fit = fit_slope(window);
    out.push_back({static_cast<double>(q.u), static_cast<double>(q.v),
                   normalize_half_turn(fit.slope + std::numbers::pi / 2), geom.length, geom.width});
  }
  return out;
}

}  // namespace skelgrasp
