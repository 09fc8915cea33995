// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "skelgrasp/cloud.hpp"

namespace skelgrasp {

// ASCII PCD v0.7 reader/writer for organized clouds. Invalid cells are written as
// "nan nan nan"; coordinates use the shortest round-trip decimal form.

namespace pcd_detail {

inline std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& tok, std::size_t line_no) {
  if (tok == "nan" || tok == "NaN" || tok == "-nan" || tok == "NAN") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("pcd: bad number '" + tok + "' on line " + std::to_string(line_no));
  return value;
}

inline long parse_int(const std::string& tok, const std::string& key) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
    throw ParseError("pcd: bad " + key + " value '" + tok + "'");
  return value;
}

inline void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace pcd_detail

struct PcdHeader {
  std::vector<std::string> fields;
  std::vector<std::string> types;
  std::vector<int> sizes;
  long width = -1;
  long height = -1;
  long points = -1;
  std::string data;
};

inline OrganizedCloud read_pcd(std::istream& in) {
  using namespace pcd_detail;
  PcdHeader h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& key = tok[0];
    if (key == "VERSION") {
      continue;
    } else if (key == "FIELDS") {
      h.fields.assign(tok.begin() + 1, tok.end());
    } else if (key == "SIZE") {
      for (std::size_t i = 1; i < tok.size(); ++i) h.sizes.push_back(static_cast<int>(parse_int(tok[i], "SIZE")));
    } else if (key == "TYPE") {
      h.types.assign(tok.begin() + 1, tok.end());
    } else if (key == "COUNT") {
      for (std::size_t i = 1; i < tok.size(); ++i)
        if (parse_int(tok[i], "COUNT") != 1) throw ParseError("pcd: only COUNT 1 fields are supported");
    } else if (key == "WIDTH") {
      if (tok.size() != 2) throw ParseError("pcd: malformed WIDTH");
      h.width = parse_int(tok[1], "WIDTH");
    } else if (key == "HEIGHT") {
      if (tok.size() != 2) throw ParseError("pcd: malformed HEIGHT");
      h.height = parse_int(tok[1], "HEIGHT");
    } else if (key == "VIEWPOINT") {
      continue;
    } else if (key == "POINTS") {
      if (tok.size() != 2) throw ParseError("pcd: malformed POINTS");
      h.points = parse_int(tok[1], "POINTS");
    } else if (key == "DATA") {
      if (tok.size() != 2) throw ParseError("pcd: malformed DATA");
      h.data = tok[1];
      break;
    } else {
      throw ParseError("pcd: unknown header key '" + key + "' on line " + std::to_string(line_no));
    }
  }
  if (h.data.empty()) throw ParseError("pcd: missing DATA line");
  if (h.data != "ascii") throw ParseError("pcd: only DATA ascii is supported");
  if (h.width < 0 || h.height < 0) throw ParseError("pcd: missing WIDTH or HEIGHT");
  if (h.points < 0) h.points = h.width * h.height;
  if (h.width * h.height != h.points)
    throw DimensionError("pcd: WIDTH*HEIGHT (" + std::to_string(h.width * h.height) + ") != POINTS (" +
                         std::to_string(h.points) + ")");

  int ix = -1, iy = -1, iz = -1, irgb = -1;
  for (std::size_t i = 0; i < h.fields.size(); ++i) {
    const std::string& f = h.fields[i];
    if (f == "x") ix = static_cast<int>(i);
    else if (f == "y") iy = static_cast<int>(i);
    else if (f == "z") iz = static_cast<int>(i);
    else if (f == "rgb" || f == "rgba") irgb = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) throw ParseError("pcd: FIELDS must contain x y z");
  const bool rgb_is_float = irgb >= 0 && static_cast<std::size_t>(irgb) < h.types.size() && h.types[irgb] == "F";

  OrganizedCloud cloud(static_cast<int>(h.width), static_cast<int>(h.height));
  std::vector<Rgb> colors;
  if (irgb >= 0) colors.resize(cloud.size());
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split(line);
    if (tok.empty()) continue;
    if (tok.size() != h.fields.size())
      throw ParseError("pcd: expected " + std::to_string(h.fields.size()) + " values on line " +
                       std::to_string(line_no));
    if (n >= cloud.size()) throw ParseError("pcd: more data rows than POINTS");
    const Point3 p{parse_double(tok[ix], line_no), parse_double(tok[iy], line_no), parse_double(tok[iz], line_no)};
    const int u = static_cast<int>(n % static_cast<std::size_t>(h.width));
    const int v = static_cast<int>(n / static_cast<std::size_t>(h.width));
    cloud.set(u, v, p);
    if (irgb >= 0) {
      std::uint32_t packed = 0;
      if (rgb_is_float) {
        const float f = static_cast<float>(parse_double(tok[irgb], line_no));
        std::memcpy(&packed, &f, sizeof(packed));
      } else {
        packed = static_cast<std::uint32_t>(parse_double(tok[irgb], line_no));
      }
      colors[n] = {static_cast<std::uint8_t>((packed >> 16) & 0xff), static_cast<std::uint8_t>((packed >> 8) & 0xff),
                   static_cast<std::uint8_t>(packed & 0xff)};
    }
    ++n;
  }
  if (n != cloud.size())
    throw ParseError("pcd: expected " + std::to_string(cloud.size()) + " data rows, found " + std::to_string(n));
  if (irgb >= 0) cloud.set_colors(std::move(colors));
  return cloud;
}

inline OrganizedCloud load_pcd(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_pcd(in);
}

inline void write_pcd(std::ostream& out, const OrganizedCloud& cloud) {
  const bool rgb = cloud.has_colors();
  std::string s;
  s += "# .PCD v0.7 - Point Cloud Data file format\nVERSION 0.7\n";
  s += rgb ? "FIELDS x y z rgb\nSIZE 8 8 8 4\nTYPE F F F U\nCOUNT 1 1 1 1\n"
           : "FIELDS x y z\nSIZE 8 8 8\nTYPE F F F\nCOUNT 1 1 1\n";
  s += "WIDTH " + std::to_string(cloud.width()) + "\nHEIGHT " + std::to_string(cloud.height()) + "\n";
  s += "VIEWPOINT 0 0 0 1 0 0 0\nPOINTS " + std::to_string(cloud.size()) + "\nDATA ascii\n";
  out << s;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    s.clear();
    if (cloud.valid(i)) {
      const Point3& p = cloud.point(i);
      pcd_detail::append_double(s, p.x);
      s += ' ';
      pcd_detail::append_double(s, p.y);
      s += ' ';
      pcd_detail::append_double(s, p.z);
    } else {
      s += "nan nan nan";
    }
    if (rgb) {
      const Rgb c = cloud.colors()[i];
      const std::uint32_t packed = (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
      s += ' ';
      s += std::to_string(packed);
    }
    s += '\n';
    out << s;
  }
}

inline void write_pcd(const std::string& path, const OrganizedCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_pcd(out, cloud);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace skelgrasp
