// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skelgrasp/geometry.hpp"

namespace skelgrasp {

/// Row-major H x W grid of values.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DimensionError("negative grid size");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int row, int col) const { return row >= 0 && col >= 0 && row < height_ && col < width_; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  T& operator()(int row, int col) { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[index(row, col)]; }

  T& at(int row, int col) {
    if (!contains(row, col)) throw RangeError("grid access out of range");
    return (*this)(row, col);
  }
  const T& at(int row, int col) const {
    if (!contains(row, col)) throw RangeError("grid access out of range");
    return (*this)(row, col);
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Binary image; 1 = set.
using BinaryImage = Grid<std::uint8_t>;

inline std::size_t count_set(const BinaryImage& img) {
  std::size_t n = 0;
  for (auto b : img.data()) n += b ? 1 : 0;
  return n;
}

/// Set pixels in (row, col) order.
inline std::vector<Pixel> set_pixels(const BinaryImage& img) {
  std::vector<Pixel> out;
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      if (img(r, c)) out.push_back({c, r});
  return out;
}

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  constexpr bool operator==(const Rgb&) const = default;
};

using RgbImage = Grid<Rgb>;
using DepthImage = Grid<std::uint16_t>;

}  // namespace skelgrasp
