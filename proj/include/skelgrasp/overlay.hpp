// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>

#include "skelgrasp/image.hpp"
#include "skelgrasp/segmentation.hpp"
#include "skelgrasp/selection.hpp"
#include "skelgrasp/skeleton.hpp"

namespace skelgrasp {

struct OverlayPalette {
  Rgb background{24, 24, 24};
  Rgb mask{60, 60, 100};
  Rgb contour{235, 235, 235};
  Rgb skeleton{255, 210, 0};
  Rgb candidate{0, 120, 200};
  Rgb selected{230, 30, 30};
};

/// Corner pixels of a rectangle, rounded to the nearest pixel, in rectangle_corners order.
inline std::array<Pixel, 4> corner_pixels(const GraspRectangle& r) {
  std::array<Pixel, 4> out{};
  const auto c = rectangle_corners(r);
  for (int i = 0; i < 4; ++i)
    out[i] = {static_cast<int>(std::lround(c[i].first)), static_cast<int>(std::lround(c[i].second))};
  return out;
}

inline void draw_rectangle(RgbImage& img, const GraspRectangle& r, Rgb color) {
  const auto c = corner_pixels(r);
  for (int i = 0; i < 4; ++i) {
    walk_line(c[i], c[(i + 1) % 4], [&](Pixel p) {
      if (img.contains(p.v, p.u)) img(p.v, p.u) = color;
    });
  }
}

/// Paints one object: mask fill, its outline (mask pixels with a 4-neighbor outside the mask),
/// skeleton, every candidate and, on top, the selected rectangle with a mark at its center.
inline void paint_object(RgbImage& img, const BinaryImage& mask, const Skeleton& skeleton,
                         std::span<const GraspRectangle> candidates, const std::optional<GraspDecision>& decision,
                         const OverlayPalette& pal = {}) {
  if (mask.width() != img.width() || mask.height() != img.height())
    throw DimensionError("overlay: mask and image sizes differ");
  for (int v = 0; v < mask.height(); ++v) {
    for (int u = 0; u < mask.width(); ++u) {
      if (!mask(v, u)) continue;
      const bool edge = v == 0 || u == 0 || v + 1 == mask.height() || u + 1 == mask.width() || !mask(v - 1, u) ||
                        !mask(v + 1, u) || !mask(v, u - 1) || !mask(v, u + 1);
      img(v, u) = edge ? pal.contour : pal.mask;
    }
  }
  for (const Pixel& p : skeleton.pixels)
    if (img.contains(p.v, p.u)) img(p.v, p.u) = pal.skeleton;
  for (const auto& r : candidates) draw_rectangle(img, r, pal.candidate);
  if (decision) {
    const GraspRectangle& r = decision->rectangle;
    draw_rectangle(img, r, pal.selected);
    const int cu = static_cast<int>(std::lround(r.x)), cv = static_cast<int>(std::lround(r.y));
    for (int d = -3; d <= 3; ++d) {
      if (img.contains(cv, cu + d)) img(cv, cu + d) = pal.selected;
      if (img.contains(cv + d, cu)) img(cv + d, cu) = pal.selected;
    }
  }
}

/// Diagnostic image for a single object.
inline RgbImage render_overlay(int width, int height, const BinaryImage& mask, const Skeleton& skeleton,
                               std::span<const GraspRectangle> candidates, const std::optional<GraspDecision>& decision,
                               const OverlayPalette& pal = {}) {
  if (width <= 0 || height <= 0) throw DimensionError("overlay: image size must be positive");
  RgbImage img(width, height, pal.background);
  paint_object(img, mask, skeleton, candidates, decision, pal);
  return img;
}

}  // namespace skelgrasp
