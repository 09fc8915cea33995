// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "skelgrasp/cloud.hpp"
#include "skelgrasp/image.hpp"

namespace skelgrasp {

enum class Shape { Box, Cylinder, Sphere, LPrism, TPrism };

inline std::string to_string(Shape s) {
  switch (s) {
    case Shape::Box: return "box";
    case Shape::Cylinder: return "cylinder";
    case Shape::Sphere: return "sphere";
    case Shape::LPrism: return "l_prism";
    case Shape::TPrism: return "t_prism";
  }
  return "box";
}

inline Shape shape_from_string(const std::string& s) {
  if (s == "box") return Shape::Box;
  if (s == "cylinder") return Shape::Cylinder;
  if (s == "sphere") return Shape::Sphere;
  if (s == "l_prism" || s == "L-prism" || s == "l-prism") return Shape::LPrism;
  if (s == "t_prism" || s == "T-prism" || s == "t-prism") return Shape::TPrism;
  throw ParseError("unknown shape '" + s + "'");
}

/// Placement on the table: (x, y) of the footprint center in the camera frame, yaw about
/// the camera axis, and the height of the object's base above the table (for stacking).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double base = 0.0;
};

/// Object dimensions in meters. Interpretation per shape:
///   box       length (x) x width (y) x height
///   cylinder  radius, height (axis along the camera axis)
///   sphere    radius
///   l_prism   arms of `length` along x and `width` along y, both `thickness` wide, extruded `height`
///   t_prism   bar of `length` along x, stem reaching `width` in total along y, arms `thickness` wide
struct Dimensions {
  double length = 0.1;
  double width = 0.1;
  double height = 0.05;
  double radius = 0.04;
  double thickness = 0.04;
};

struct SceneObject {
  Shape shape = Shape::Box;
  Pose pose;
  Dimensions dims;

  /// Top of the object measured as a height above the table.
  double top() const { return pose.base + (shape == Shape::Sphere ? 2.0 * dims.radius : dims.height); }
  /// Radius of a circle around (x, y) that contains the footprint.
  double footprint_radius() const {
    switch (shape) {
      case Shape::Box:
      case Shape::LPrism:
      case Shape::TPrism: return 0.5 * std::hypot(dims.length, dims.width);
      case Shape::Cylinder:
      case Shape::Sphere: return dims.radius;
    }
    return 0.0;
  }
};

struct SceneSpec {
  int width = 640;
  int height = 480;
  double camera_height = 0.8;  ///< table depth along the camera axis (m)
  CameraIntrinsics intrinsics{};
  std::vector<SceneObject> objects;
  double noise_sigma = 0.002;  ///< additive Gaussian depth noise (m)
  /// Surfaces seen at an incidence cosine below this return no depth, as on a structured-light sensor.
  double dropout_cos = 0.26;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<BinaryImage> masks;      ///< visible pixels of each object; disjoint
  std::vector<Point3> centroids;       ///< 3-D center of each object's volume
  double table_depth = 0.8;
  Grid<std::int32_t> labels;           ///< -1 table, else object index
};

struct RenderedScene {
  OrganizedCloud cloud;
  GroundTruth truth;
};

namespace scene_detail {

// Box-Muller on mt19937_64 bits; std::normal_distribution differs between standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Point3 normal{};
  int object = -1;
};

// Axis-aligned box in a yawed frame centered at `center`; half extents `half`.
struct OrientedBox {
  Point3 center;
  Point3 half;
  double cos_yaw = 1.0, sin_yaw = 0.0;
  int object = -1;
};

inline Point3 to_local(const OrientedBox& b, const Point3& v) {
  return {b.cos_yaw * v.x + b.sin_yaw * v.y, -b.sin_yaw * v.x + b.cos_yaw * v.y, v.z};
}
inline Point3 to_world(const OrientedBox& b, const Point3& v) {
  return {b.cos_yaw * v.x - b.sin_yaw * v.y, b.sin_yaw * v.x + b.cos_yaw * v.y, v.z};
}

inline void intersect_box(const OrientedBox& b, const Point3& dir, Hit& best) {
  const Point3 o = to_local(b, Point3{} - b.center);
  const Point3 d = to_local(b, dir);
  const double oc[3] = {o.x, o.y, o.z}, dc[3] = {d.x, d.y, d.z}, hc[3] = {b.half.x, b.half.y, b.half.z};
  double tmin = -std::numeric_limits<double>::infinity(), tmax = std::numeric_limits<double>::infinity();
  int axis = -1;
  double sign = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dc[a]) < 1e-15) {
      if (oc[a] < -hc[a] || oc[a] > hc[a]) return;
      continue;
    }
    double t1 = (-hc[a] - oc[a]) / dc[a], t2 = (hc[a] - oc[a]) / dc[a];
    double s = -1.0;
    if (t1 > t2) {
      std::swap(t1, t2);
      s = 1.0;
    }
    if (t1 > tmin) {
      tmin = t1;
      axis = a;
      sign = s;
    }
    tmax = std::min(tmax, t2);
  }
  if (tmin > tmax || tmin <= 0.0 || axis < 0 || tmin >= best.t) return;
  Point3 n{};
  if (axis == 0) n.x = sign;
  else if (axis == 1) n.y = sign;
  else n.z = sign;
  best = {tmin, to_world(b, n), b.object};
}

struct VerticalCylinder {
  double cx, cy, z_top, z_bottom, radius;
  int object;
};

inline void intersect_cylinder(const VerticalCylinder& c, const Point3& dir, Hit& best) {
  // Top cap.
  const double t_cap = c.z_top / dir.z;
  const double px = dir.x * t_cap - c.cx, py = dir.y * t_cap - c.cy;
  if (px * px + py * py <= c.radius * c.radius) {
    if (t_cap > 0.0 && t_cap < best.t) best = {t_cap, {0, 0, -1}, c.object};
    return;
  }
  // Side wall: |t*dxy - c| = r.
  const double a = dir.x * dir.x + dir.y * dir.y;
  if (a < 1e-18) return;
  const double b = -2.0 * (dir.x * c.cx + dir.y * c.cy);
  const double cc = c.cx * c.cx + c.cy * c.cy - c.radius * c.radius;
  const double disc = b * b - 4 * a * cc;
  if (disc < 0.0) return;
  const double t = (-b - std::sqrt(disc)) / (2 * a);
  const double z = t * dir.z;
  if (t <= 0.0 || z < c.z_top || z > c.z_bottom || t >= best.t) return;
  const double nx = dir.x * t - c.cx, ny = dir.y * t - c.cy;
  best = {t, Point3{nx, ny, 0.0} * (1.0 / c.radius), c.object};
}

struct Ball {
  Point3 center;
  double radius;
  int object;
};

inline void intersect_sphere(const Ball& s, const Point3& dir, Hit& best) {
  const double a = dot(dir, dir);
  const double b = -2.0 * dot(dir, s.center);
  const double c = dot(s.center, s.center) - s.radius * s.radius;
  const double disc = b * b - 4 * a * c;
  if (disc < 0.0) return;
  const double t = (-b - std::sqrt(disc)) / (2 * a);
  if (t <= 0.0 || t >= best.t) return;
  best = {t, (dir * t - s.center) * (1.0 / s.radius), s.object};
}

struct Primitives {
  std::vector<OrientedBox> boxes;
  std::vector<VerticalCylinder> cylinders;
  std::vector<Ball> balls;
};

inline void add_object(Primitives& prims, const SceneObject& o, int id, double table) {
  const double c = std::cos(o.pose.yaw), s = std::sin(o.pose.yaw);
  const double bottom = table - o.pose.base;
  auto box = [&](double lx0, double lx1, double ly0, double ly1) {
    const double mx = 0.5 * (lx0 + lx1), my = 0.5 * (ly0 + ly1);
    OrientedBox b;
    b.center = {o.pose.x + c * mx - s * my, o.pose.y + s * mx + c * my, bottom - 0.5 * o.dims.height};
    b.half = {0.5 * (lx1 - lx0), 0.5 * (ly1 - ly0), 0.5 * o.dims.height};
    b.cos_yaw = c;
    b.sin_yaw = s;
    b.object = id;
    prims.boxes.push_back(b);
  };
  const Dimensions& d = o.dims;
  switch (o.shape) {
    case Shape::Box: box(-d.length / 2, d.length / 2, -d.width / 2, d.width / 2); break;
    case Shape::Cylinder:
      prims.cylinders.push_back({o.pose.x, o.pose.y, bottom - d.height, bottom, d.radius, id});
      break;
    case Shape::Sphere: prims.balls.push_back({{o.pose.x, o.pose.y, bottom - d.radius}, d.radius, id}); break;
    case Shape::LPrism: {
      // Footprint bounding box centered on the pose: corner at (-L/2, -W/2).
      const double x0 = -d.length / 2, y0 = -d.width / 2;
      box(x0, x0 + d.length, y0, y0 + d.thickness);
      box(x0, x0 + d.thickness, y0 + d.thickness, y0 + d.width);
      break;
    }
    case Shape::TPrism: {
      const double y0 = -d.width / 2;
      box(-d.length / 2, d.length / 2, y0, y0 + d.thickness);
      box(-d.thickness / 2, d.thickness / 2, y0 + d.thickness, y0 + d.width);
      break;
    }
  }
}

inline Point3 volume_centroid(const SceneObject& o, double table) {
  const double bottom = table - o.pose.base;
  const Dimensions& d = o.dims;
  const double c = std::cos(o.pose.yaw), s = std::sin(o.pose.yaw);
  auto world = [&](double lx, double ly, double z) {
    return Point3{o.pose.x + c * lx - s * ly, o.pose.y + s * lx + c * ly, z};
  };
  switch (o.shape) {
    case Shape::Box: return world(0, 0, bottom - d.height / 2);
    case Shape::Cylinder: return world(0, 0, bottom - d.height / 2);
    case Shape::Sphere: return world(0, 0, bottom - d.radius);
    case Shape::LPrism: {
      const double x0 = -d.length / 2, y0 = -d.width / 2, t = d.thickness;
      const double a1 = d.length * t, a2 = t * (d.width - t);
      const double cx = (a1 * (x0 + d.length / 2) + a2 * (x0 + t / 2)) / (a1 + a2);
      const double cy = (a1 * (y0 + t / 2) + a2 * (y0 + t + (d.width - t) / 2)) / (a1 + a2);
      return world(cx, cy, bottom - d.height / 2);
    }
    case Shape::TPrism: {
      const double y0 = -d.width / 2, t = d.thickness;
      const double a1 = d.length * t, a2 = t * (d.width - t);
      const double cy = (a1 * (y0 + t / 2) + a2 * (y0 + t + (d.width - t) / 2)) / (a1 + a2);
      return world(0, cy, bottom - d.height / 2);
    }
  }
  return {};
}

inline Point3 ray_direction(const CameraIntrinsics& k, int u, int v) {
  return {(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
}

inline void validate_object(const SceneSpec& spec, const SceneObject& o) {
  const Dimensions& d = o.dims;
  const bool ok = o.shape == Shape::Sphere     ? d.radius > 0
                  : o.shape == Shape::Cylinder ? d.radius > 0 && d.height > 0
                  : o.shape == Shape::Box      ? d.length > 0 && d.width > 0 && d.height > 0
                                               : d.length > 0 && d.width > 0 && d.height > 0 && d.thickness > 0 &&
                                            d.thickness < d.length && d.thickness < d.width;
  if (!ok) throw Error("scene: object dimensions must be positive (" + to_string(o.shape) + ")");
  if (o.pose.base < 0.0) throw Error("scene: object lies below the table");
  if (o.top() >= spec.camera_height) throw Error("scene: object reaches the camera");
  // Footprint must project inside the frustum at the object's top.
  const double r = o.footprint_radius();
  const double z = spec.camera_height - o.top();
  const auto& k = spec.intrinsics;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const double u = k.fx * (o.pose.x + sx * r) / z + k.cx;
      const double v = k.fy * (o.pose.y + sy * r) / z + k.cy;
      if (u < 0 || v < 0 || u > spec.width - 1 || v > spec.height - 1)
        throw Error("scene: object outside the camera frustum");
    }
  }
}

}  // namespace scene_detail

inline void validate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) throw Error("scene: image size must be positive");
  if (!(spec.camera_height > 0)) throw Error("scene: camera height must be positive");
  if (!(spec.noise_sigma >= 0)) throw Error("scene: noise sigma must be non-negative");
  spec.intrinsics.validate(spec.width, spec.height);
  for (const auto& o : spec.objects) scene_detail::validate_object(spec, o);
}

/// Ray-casts the scene: nearest surface per pixel, dropout at grazing incidence,
/// Gaussian noise on depth, then back-projection along the pixel ray.
inline RenderedScene render(const SceneSpec& spec) {
  using namespace scene_detail;
  validate(spec);
  Primitives prims;
  for (std::size_t i = 0; i < spec.objects.size(); ++i)
    add_object(prims, spec.objects[i], static_cast<int>(i), spec.camera_height);

  RenderedScene out;
  out.cloud = OrganizedCloud(spec.width, spec.height);
  GroundTruth& gt = out.truth;
  gt.table_depth = spec.camera_height;
  gt.labels = Grid<std::int32_t>(spec.width, spec.height, -1);
  gt.masks.assign(spec.objects.size(), BinaryImage(spec.width, spec.height));
  for (const auto& o : spec.objects) gt.centroids.push_back(volume_centroid(o, spec.camera_height));

  GaussianSource noise(spec.seed);
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const Point3 dir = ray_direction(spec.intrinsics, u, v);
      Hit hit{spec.camera_height, {0, 0, -1}, -1};
      for (const auto& b : prims.boxes) intersect_box(b, dir, hit);
      for (const auto& c : prims.cylinders) intersect_cylinder(c, dir, hit);
      for (const auto& s : prims.balls) intersect_sphere(s, dir, hit);
      if (hit.object >= 0) {
        gt.labels(v, u) = hit.object;
        gt.masks[static_cast<std::size_t>(hit.object)](v, u) = 1;
      }
      const double n = spec.noise_sigma > 0 ? noise.normal() * spec.noise_sigma : 0.0;
      const double incidence = std::abs(dot(hit.normal, dir)) / norm(dir);
      if (incidence < spec.dropout_cos) continue;
      const double z = hit.t + n;
      out.cloud.set(u, v, dir * z);
    }
  }
  return out;
}

/// Silhouette of object `i` rendered alone (ignores occlusion by the other objects).
inline BinaryImage amodal_silhouette(const SceneSpec& spec, std::size_t i) {
  using namespace scene_detail;
  Primitives prims;
  add_object(prims, spec.objects.at(i), 0, spec.camera_height);
  BinaryImage mask(spec.width, spec.height);
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const Point3 dir = ray_direction(spec.intrinsics, u, v);
      Hit hit{spec.camera_height, {0, 0, -1}, -1};
      for (const auto& b : prims.boxes) intersect_box(b, dir, hit);
      for (const auto& c : prims.cylinders) intersect_cylinder(c, dir, hit);
      for (const auto& s : prims.balls) intersect_sphere(s, dir, hit);
      if (hit.object >= 0) mask(v, u) = 1;
    }
  }
  return mask;
}

/// Random graspable object of the given shape centered at the origin, yaw in [0, pi).
inline SceneObject random_object(Shape shape, scene_detail::GaussianSource& rng) {
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  SceneObject o;
  o.shape = shape;
  o.pose.yaw = uni(0.0, std::numbers::pi);
  Dimensions& d = o.dims;
  switch (shape) {
    case Shape::Box:
      d.length = uni(0.08, 0.14);
      d.width = uni(0.04, 0.07);
      d.height = uni(0.06, 0.09);
      break;
    case Shape::Cylinder:
      d.radius = uni(0.025, 0.035);
      d.height = uni(0.06, 0.10);
      break;
    case Shape::Sphere: d.radius = uni(0.035, 0.045); break;
    case Shape::LPrism:
      d.length = uni(0.14, 0.18);
      d.width = uni(0.14, 0.18);
      d.thickness = uni(0.035, 0.05);
      d.height = uni(0.06, 0.09);
      break;
    case Shape::TPrism:
      d.length = uni(0.14, 0.18);
      d.width = uni(0.12, 0.16);
      d.thickness = uni(0.035, 0.05);
      d.height = uni(0.06, 0.09);
      break;
  }
  return o;
}

/// Adds `n_objects` random objects to `spec`. Objects whose footprint overlaps earlier ones are
/// stacked on the highest of them, so objects touch and occlude but never interpenetrate.
inline SceneSpec clutter(SceneSpec spec, int n_objects, std::uint64_t seed, double region_x = 0.16,
                         double region_y = 0.10, int max_retries = 200) {
  if (n_objects < 1) throw Error("clutter: n_objects must be at least 1");
  scene_detail::GaussianSource rng(seed);
  constexpr Shape kShapes[] = {Shape::Box, Shape::Cylinder, Shape::Sphere, Shape::LPrism, Shape::TPrism};
  const std::size_t first_new = spec.objects.size();
  for (int k = 0; k < n_objects; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < max_retries && !placed; ++attempt) {
      SceneObject o = random_object(kShapes[rng.engine()() % 5], rng);
      o.pose.x = (2.0 * rng.uniform() - 1.0) * region_x;
      o.pose.y = (2.0 * rng.uniform() - 1.0) * region_y;
      double base = 0.0;
      bool rests_on_sphere = false;
      for (std::size_t j = first_new; j < spec.objects.size(); ++j) {
        const SceneObject& other = spec.objects[j];
        const double dist = std::hypot(o.pose.x - other.pose.x, o.pose.y - other.pose.y);
        if (dist < o.footprint_radius() + other.footprint_radius()) {
          base = std::max(base, other.top());
          rests_on_sphere = rests_on_sphere || other.shape == Shape::Sphere;
        }
      }
      if (rests_on_sphere || base > 0.2) continue;
      o.pose.base = base;
      try {
        scene_detail::validate_object(spec, o);
      } catch (const Error&) {
        continue;
      }
      spec.objects.push_back(o);
      placed = true;
    }
    if (!placed) throw Error("clutter: could not place object " + std::to_string(k));
  }
  return spec;
}

}  // namespace skelgrasp
