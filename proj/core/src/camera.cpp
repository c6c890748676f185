#include "ipp/camera.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ipp {

namespace {

// Rays closer than this to horizontal are treated as max_range hits.
constexpr double kHorizonEps = 0.017453292519943295;  // 1 deg

struct Vec3 {
  double x, y, z;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

struct FrustumFrame {
  Vec3 forward, right, up;
  double tan_half_h, tan_half_v;
};

FrustumFrame make_frame(const Pose& pose, const CameraModel& cam) {
  const double ct = std::cos(cam.pitch_down), st = std::sin(cam.pitch_down);
  const double cp = std::cos(pose.psi), sp = std::sin(pose.psi);
  FrustumFrame fr;
  fr.forward = {cp * ct, sp * ct, -st};
  fr.right = {sp, -cp, 0.0};
  fr.up = {cp * st, sp * st, ct};
  fr.tan_half_h = std::tan(cam.hfov / 2.0);
  fr.tan_half_v = std::tan(cam.vfov / 2.0);
  return fr;
}

void validate(const Pose& pose, const CameraModel& cam) {
  if (pose.z <= 0.0) throw std::invalid_argument("project_footprint: pose at or below ground");
  if (!(cam.hfov > 0.0 && cam.hfov < kPi && cam.vfov > 0.0 && cam.vfov < kPi)) {
    throw std::invalid_argument("camera: field of view must lie in (0, pi)");
  }
  if (cam.pitch_down < 0.0 || cam.pitch_down > kPi / 2.0) {
    throw std::invalid_argument("camera: pitch_down must lie in [0, pi/2]");
  }
}

}  // namespace

CameraModel CameraModel::standard() {
  return {deg_to_rad(30.0), deg_to_rad(36.9), deg_to_rad(36.9), 600.0};
}

std::array<Vec2, 4> frustum_ground_quad(const Pose& pose, const CameraModel& cam) {
  validate(pose, cam);
  const FrustumFrame fr = make_frame(pose, cam);
  const double ground_reach =
      std::sqrt(std::max(cam.max_range * cam.max_range - pose.z * pose.z, 0.0));
  // near-left, near-right, far-right, far-left
  const int sh[4] = {-1, 1, 1, -1};
  const int sv[4] = {-1, -1, 1, 1};
  std::array<Vec2, 4> quad;
  for (int i = 0; i < 4; ++i) {
    Vec3 d = fr.forward + (sh[i] * fr.tan_half_h) * fr.right + (sv[i] * fr.tan_half_v) * fr.up;
    const double len = std::sqrt(dot(d, d));
    d = (1.0 / len) * d;
    const Vec2 dxy{d.x, d.y};
    const double dxy_norm = norm(dxy);
    if (d.z < -std::sin(kHorizonEps)) {
      const double t_ground = pose.z / -d.z;
      if (t_ground <= cam.max_range) {
        quad[i] = pose.xy() + t_ground * dxy;
        continue;
      }
    }
    const Vec2 dir = dxy_norm > 0.0 ? (1.0 / dxy_norm) * dxy : unit_from_angle(pose.psi);
    quad[i] = pose.xy() + ground_reach * dir;
  }
  return quad;
}

bool sees_ground_point(const Pose& pose, const CameraModel& cam, Vec2 ground) {
  const FrustumFrame fr = make_frame(pose, cam);
  const Vec3 v{ground.x - pose.x, ground.y - pose.y, -pose.z};
  const double dist2 = dot(v, v);
  if (dist2 > cam.max_range * cam.max_range) return false;
  const double along = dot(v, fr.forward);
  if (along <= 0.0) return false;
  const double eps = 1e-9 * (1.0 + along);
  if (std::abs(dot(v, fr.right)) > fr.tan_half_h * along + eps) return false;
  if (std::abs(dot(v, fr.up)) > fr.tan_half_v * along + eps) return false;
  return true;
}

Footprint project_footprint(const Pose& pose, const CameraModel& cam, const BeliefMap& map) {
  validate(pose, cam);
  const std::array<Vec2, 4> quad = frustum_ground_quad(pose, cam);

  double x_lo = quad[0].x, x_hi = quad[0].x, y_lo = quad[0].y, y_hi = quad[0].y;
  auto grow = [&](Vec2 p) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  };
  for (int i = 1; i < 4; ++i) grow(quad[i]);
  // Pad with arc samples so the bounding box covers the max-range bulge
  // between clipped far corners.
  const double ground_reach =
      std::sqrt(std::max(cam.max_range * cam.max_range - pose.z * pose.z, 0.0));
  for (int k = -3; k <= 3; ++k) {
    const double az = pose.psi + k * (cam.hfov / 2.0 + 0.2) / 3.0;
    grow(pose.xy() + ground_reach * unit_from_angle(az));
  }

  const Bounds ext = map.extent();
  const double cs = map.cell_size();
  int col_lo = static_cast<int>(std::floor((x_lo - ext.x_min) / cs));
  int col_hi = static_cast<int>(std::floor((x_hi - ext.x_min) / cs));
  int row_lo = static_cast<int>(std::floor((y_lo - ext.y_min) / cs));
  int row_hi = static_cast<int>(std::floor((y_hi - ext.y_min) / cs));
  col_lo = std::max(col_lo, 0);
  row_lo = std::max(row_lo, 0);
  col_hi = std::min(col_hi, map.n_cols() - 1);
  row_hi = std::min(row_hi, map.n_rows() - 1);

  const FrustumFrame fr = make_frame(pose, cam);
  Footprint fp;
  for (int row = row_lo; row <= row_hi; ++row) {
    for (int col = col_lo; col <= col_hi; ++col) {
      const CellIndex idx = map.cell_index(row, col);
      const Vec2 c = map.cell_center(idx);
      const Vec3 v{c.x - pose.x, c.y - pose.y, -pose.z};
      const double dist2 = dot(v, v);
      if (dist2 > cam.max_range * cam.max_range) continue;
      const double along = dot(v, fr.forward);
      if (along <= 0.0) continue;
      const double eps = 1e-9 * (1.0 + along);
      if (std::abs(dot(v, fr.right)) > fr.tan_half_h * along + eps) continue;
      if (std::abs(dot(v, fr.up)) > fr.tan_half_v * along + eps) continue;
      fp.cells.push_back({idx, std::sqrt(dist2)});
    }
  }
  return fp;
}

int default_edge_samples(const EdgeGeometry& edge, const BeliefMap& map) {
  const double spacing = map.cell_size() / 2.0;
  return std::max(2, static_cast<int>(std::ceil(edge.length / spacing)) + 1);
}

Footprint edge_footprint(const EdgeGeometry& edge, const CameraModel& cam, const BeliefMap& map,
                         int samples) {
  if (edge.length <= 0.0) {
    return project_footprint(edge.start_pose(), cam, map);
  }
  if (samples < 2) throw std::invalid_argument("edge_footprint: need at least 2 samples");

  std::unordered_map<CellIndex, double> best;
  best.reserve(256);
  for (int i = 0; i < samples; ++i) {
    const double s = edge.length * static_cast<double>(i) / (samples - 1);
    const Footprint fp = project_footprint(edge.pose_at(s), cam, map);
    for (const CellView& cv : fp.cells) {
      auto [it, inserted] = best.emplace(cv.cell, cv.range);
      if (!inserted && cv.range < it->second) it->second = cv.range;
    }
  }
  Footprint out;
  out.cells.reserve(best.size());
  for (const auto& [cell, range] : best) out.cells.push_back({cell, range});
  std::sort(out.cells.begin(), out.cells.end(),
            [](const CellView& a, const CellView& b) { return a.cell < b.cell; });
  return out;
}

Footprint edge_footprint(const EdgeGeometry& edge, const CameraModel& cam, const BeliefMap& map) {
  return edge_footprint(edge, cam, map, default_edge_samples(edge, map));
}

}  // namespace ipp
