#pragma once

#include <cmath>
#include <vector>

namespace ipp {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double squared_norm(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;  // heading, wrapped to (-pi, pi]

  Vec2 xy() const { return {x, y}; }
};

inline double horizontal_distance(const Pose& a, const Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double spatial_distance(const Pose& a, const Pose& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Axis-aligned rectangular search bounds.
struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool contains(const Pose& p) const { return contains(p.xy()); }
};

/// Constant-curvature planar path piece. curvature > 0 turns left,
/// curvature == 0 is a straight segment.
struct PathSegment {
  Vec2 start;
  double heading = 0.0;
  double curvature = 0.0;
  double length = 0.0;

  Vec2 point_at(double s) const {
    if (std::abs(curvature) < 1e-12) {
      return start + s * unit_from_angle(heading);
    }
    const Vec2 center = start + (1.0 / curvature) * Vec2{-std::sin(heading), std::cos(heading)};
    const double radius = 1.0 / std::abs(curvature);
    const double phi0 = std::atan2(start.y - center.y, start.x - center.x);
    const double phi = phi0 + curvature * s;
    return center + radius * Vec2{std::cos(phi), std::sin(phi)};
  }

  double heading_at(double s) const { return wrap_angle(heading + curvature * s); }
  Vec2 end() const { return point_at(length); }
  double end_heading() const { return heading_at(length); }
};

/// Planar arc/straight sequence plus a linear altitude profile. Heading
/// along the edge is the path tangent. `length` is planar arc length.
struct EdgeGeometry {
  std::vector<PathSegment> segments;
  double z_start = 0.0;
  double z_end = 0.0;
  double length = 0.0;

  Pose pose_at(double s) const {
    Pose p;
    if (segments.empty()) return p;
    if (s < 0.0) s = 0.0;
    if (s > length) s = length;
    p.z = length > 0.0 ? z_start + (s / length) * (z_end - z_start) : z_start;
    double remaining = s;
    for (const PathSegment& seg : segments) {
      if (remaining <= seg.length || &seg == &segments.back()) {
        const Vec2 q = seg.point_at(remaining);
        p.x = q.x;
        p.y = q.y;
        p.psi = seg.heading_at(remaining);
        return p;
      }
      remaining -= seg.length;
    }
    return p;
  }

  Pose start_pose() const { return pose_at(0.0); }
  Pose end_pose() const { return pose_at(length); }
};

/// Single-segment edge helper.
inline EdgeGeometry make_arc_edge(const Pose& from, double curvature, double arc_length,
                                  double z_end) {
  EdgeGeometry e;
  e.segments.push_back({from.xy(), from.psi, curvature, arc_length});
  e.z_start = from.z;
  e.z_end = z_end;
  e.length = arc_length;
  return e;
}

}  // namespace ipp
