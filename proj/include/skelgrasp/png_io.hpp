// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "skelgrasp/image.hpp"

namespace skelgrasp {

// Thin libpng wrappers: 16-bit grayscale depth in, 8-bit grayscale / RGB out.

namespace png_detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void write_rows(const std::string& path, int width, int height, int color_type, int bit_depth,
                       const std::vector<png_bytep>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png: write failed for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace png_detail

/// Reads a single-channel 16-bit PNG (values in millimeters).
inline DepthImage read_depth_png(const std::string& path) {
  png_detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  DepthImage out;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("png: cannot decode " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("png: depth image must be 16-bit grayscale: " + path);
  }
  png_set_swap(png);
  png_read_update_info(png, info);
  out = DepthImage(width, height);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[r] = reinterpret_cast<png_bytep>(&out(r, 0));
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

inline void write_depth_png(const std::string& path, const DepthImage& img) {
  DepthImage copy = img;
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r) rows[r] = reinterpret_cast<png_bytep>(&copy(r, 0));
  png_detail::write_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 16, rows);
}

/// Writes a mask as 8-bit grayscale, set pixels as 255.
inline void write_mask_png(const std::string& path, const BinaryImage& mask) {
  Grid<std::uint8_t> img(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) img.data()[i] = mask.data()[i] ? 255 : 0;
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r) rows[r] = &img(r, 0);
  png_detail::write_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 8, rows);
}

inline void write_rgb_png(const std::string& path, const RgbImage& img) {
  RgbImage copy = img;
  static_assert(sizeof(Rgb) == 3);
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r) rows[r] = reinterpret_cast<png_bytep>(&copy(r, 0));
  png_detail::write_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, rows);
}

/// Reads an 8-bit grayscale PNG as a mask (nonzero = set).
inline BinaryImage read_mask_png(const std::string& path) {
  png_detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  BinaryImage out;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("png: cannot decode " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("png: mask must be 8-bit grayscale: " + path);
  }
  out = BinaryImage(width, height);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[r] = &out(r, 0);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  for (auto& b : out.data()) b = b ? 1 : 0;
  return out;
}

}  // namespace skelgrasp
