// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "skelgrasp/image.hpp"

namespace skelgrasp {

/// Binary object mask with its pixel centroid.
struct ObjectMask {
  BinaryImage bits;
  RowCol centroid;
  bool inverted = false;  ///< true when the fill leaked outside and was complemented

  int width() const { return bits.width(); }
  int height() const { return bits.height(); }
};

/// Visits every pixel of the 8-connected digital line from a to b (inclusive), in order.
template <typename Visit>
void walk_line(Pixel a, Pixel b, Visit&& visit) {
  int x = a.u, y = a.v;
  const int dx = std::abs(b.u - a.u), dy = -std::abs(b.v - a.v);
  const int sx = a.u < b.u ? 1 : -1, sy = a.v < b.v ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    visit(Pixel{x, y});
    if (x == b.u && y == b.v) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

/// Sets every pixel on the line from a to b that falls inside the image.
inline void draw_line(BinaryImage& img, Pixel a, Pixel b) {
  walk_line(a, b, [&](Pixel p) {
    if (img.contains(p.v, p.u)) img(p.v, p.u) = 1;
  });
}

/// Draws the contour as a gap-free barrier: its pixels plus line segments between consecutive
/// pixels, including the closing segment from the last pixel back to the first.
inline BinaryImage rasterize_contour(std::span<const Pixel> pixels, int width, int height) {
  if (pixels.empty()) throw Error("rasterize_contour: no pixels");
  BinaryImage img(width, height);
  for (const Pixel& p : pixels)
    if (!img.contains(p.v, p.u)) throw RangeError("rasterize_contour: pixel outside the image");
  for (std::size_t i = 0; i + 1 < pixels.size(); ++i) draw_line(img, pixels[i], pixels[i + 1]);
  draw_line(img, pixels.back(), pixels.front());
  return img;
}

/// Mean (row, col) of the given pixels.
inline RowCol mean_pixel(std::span<const Pixel> pixels) {
  if (pixels.empty()) throw Error("mean_pixel: no pixels");
  double r = 0.0, c = 0.0;
  for (const Pixel& p : pixels) {
    r += p.v;
    c += p.u;
  }
  const double n = static_cast<double>(pixels.size());
  return {r / n, c / n};
}

/// Rounds a real-valued seed to a pixel and, if it sits on the barrier, moves it to the nearest
/// non-barrier pixel (Euclidean; ties by row, then column).
inline Pixel resolve_seed(const BinaryImage& barrier, RowCol seed) {
  const int row = static_cast<int>(std::lround(seed.row));
  const int col = static_cast<int>(std::lround(seed.col));
  if (!barrier.contains(row, col)) throw RangeError("flood fill: seed outside the image");
  if (!barrier(row, col)) return {col, row};
  long best = std::numeric_limits<long>::max();
  Pixel out{-1, -1};
  for (int r = 0; r < barrier.height(); ++r) {
    for (int c = 0; c < barrier.width(); ++c) {
      if (barrier(r, c)) continue;
      const long d = static_cast<long>(r - row) * (r - row) + static_cast<long>(c - col) * (c - col);
      if (d < best) {
        best = d;
        out = {c, r};
      }
    }
  }
  if (out.u < 0) throw Error("flood fill: barrier covers the whole image");
  return out;
}

/// 4-connected region reachable from the seed without crossing the barrier, plus the barrier.
inline BinaryImage flood_fill_region(const BinaryImage& barrier, RowCol seed) {
  const Pixel s = resolve_seed(barrier, seed);
  BinaryImage out = barrier;
  BinaryImage seen(barrier.width(), barrier.height());
  std::vector<Pixel> stack{s};
  seen(s.v, s.u) = 1;
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    out(p.v, p.u) = 1;
    const Pixel next[4] = {{p.u + 1, p.v}, {p.u - 1, p.v}, {p.u, p.v + 1}, {p.u, p.v - 1}};
    for (const Pixel& q : next) {
      if (!barrier.contains(q.v, q.u) || seen(q.v, q.u) || barrier(q.v, q.u)) continue;
      seen(q.v, q.u) = 1;
      stack.push_back(q);
    }
  }
  return out;
}

/// Mean (row, col) of the set pixels.
inline RowCol centroid(const BinaryImage& mask) {
  double r = 0.0, c = 0.0;
  std::size_t n = 0;
  for (int row = 0; row < mask.height(); ++row) {
    for (int col = 0; col < mask.width(); ++col) {
      if (!mask(row, col)) continue;
      r += row;
      c += col;
      ++n;
    }
  }
  if (n == 0) throw Error("centroid: empty mask");
  return {r / static_cast<double>(n), c / static_cast<double>(n)};
}

/// Fills from the seed; a fill covering more than half the image is taken to be the outside and
/// is complemented, with the barrier kept as object.
inline ObjectMask object_mask(const BinaryImage& barrier, RowCol seed) {
  ObjectMask out;
  out.bits = flood_fill_region(barrier, seed);
  const std::size_t total = barrier.size();
  if (2 * count_set(out.bits) > total) {
    for (std::size_t i = 0; i < total; ++i) out.bits.data()[i] = (!out.bits.data()[i] || barrier.data()[i]) ? 1 : 0;
    out.inverted = true;
  }
  out.centroid = centroid(out.bits);
  return out;
}

}  // namespace skelgrasp
