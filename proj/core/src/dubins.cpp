#include "ipp/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ipp {

namespace {

constexpr double kTinyLateral = 1e-9;

double wrap_positive(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  // Snap the straight-line ambiguity (0 vs 2*pi) to zero.
  if (a > 2.0 * kPi - 1e-7) a = 0.0;
  return a;
}

struct Word {
  double length = std::numeric_limits<double>::infinity();
  double arc1 = 0.0;       // swept angle of the first arc
  int dir1 = 0;            // +1 left, -1 right
  double straight = -1.0;  // >= 0 for arc+straight words
  double arc2 = 0.0;       // swept angle of the second arc (opposite dir)
};

// Local frame: start at origin, heading 0, target t.
void try_arc_straight(Vec2 t, double r, int s, Word& best) {
  const Vec2 c{0.0, s * r};
  const Vec2 tc = t - c;
  const double d = norm(tc);
  if (d < r) return;
  const double straight = std::sqrt(std::max(d * d - r * r, 0.0));
  const double phi = std::atan2(tc.y, tc.x);
  const double xi = std::atan2(straight, r);
  const double phi_exit = s > 0 ? phi - xi : phi + xi;
  const double phi_start = s > 0 ? -kPi / 2.0 : kPi / 2.0;
  const double a = wrap_positive(s * (phi_exit - phi_start));
  const double len = r * a + straight;
  if (len < best.length) best = {len, a, s, straight, 0.0};
}

void try_arc_arc(Vec2 t, double r, int s, Word& best) {
  const Vec2 c1{0.0, s * r};
  const Vec2 d = t - c1;
  const double D = norm(d);
  if (D < r || D > 3.0 * r) return;
  // Second turn circle: distance 2r from c1, distance r from the target.
  const double a_leg = (D * D + 4.0 * r * r - r * r) / (2.0 * D);
  const double h2 = 4.0 * r * r - a_leg * a_leg;
  if (h2 < 0.0) return;
  const double h = std::sqrt(h2);
  const Vec2 ex = (1.0 / D) * d;
  const Vec2 ey{-ex.y, ex.x};
  for (int sign = -1; sign <= 1; sign += 2) {
    const Vec2 c2 = c1 + a_leg * ex + (sign * h) * ey;
    const Vec2 m = c1 + 0.5 * (c2 - c1);  // tangency point
    const double phi_start = s > 0 ? -kPi / 2.0 : kPi / 2.0;
    const double phi_m1 = std::atan2(m.y - c1.y, m.x - c1.x);
    const double a1 = wrap_positive(s * (phi_m1 - phi_start));
    const double phi_m2 = std::atan2(m.y - c2.y, m.x - c2.x);
    const double phi_t = std::atan2(t.y - c2.y, t.x - c2.x);
    const double a2 = wrap_positive(-s * (phi_t - phi_m2));
    const double len = r * (a1 + a2);
    if (len < best.length) best = {len, a1, s, -1.0, a2};
  }
}

}  // namespace

std::optional<EdgeGeometry> dubins_to_point(Vec2 start, double heading, Vec2 target,
                                            double turn_radius) {
  const double c = std::cos(heading), s = std::sin(heading);
  const Vec2 rel = target - start;
  const Vec2 t{c * rel.x + s * rel.y, -s * rel.x + c * rel.y};
  const double dist = norm(t);
  if (dist < kTinyLateral) return std::nullopt;

  EdgeGeometry edge;
  if (std::abs(t.y) < kTinyLateral * std::max(1.0, dist) && t.x > 0.0) {
    edge.segments.push_back({start, heading, 0.0, t.x});
    edge.length = t.x;
    return edge;
  }

  Word best;
  for (int dir : {1, -1}) {
    try_arc_straight(t, turn_radius, dir, best);
    try_arc_arc(t, turn_radius, dir, best);
  }
  if (!std::isfinite(best.length)) return std::nullopt;

  const double k1 = best.dir1 / turn_radius;
  Pose cursor{start.x, start.y, 0.0, heading};
  if (best.arc1 > 0.0) {
    PathSegment seg{cursor.xy(), cursor.psi, k1, turn_radius * best.arc1};
    edge.segments.push_back(seg);
    const Vec2 e = seg.end();
    cursor = {e.x, e.y, 0.0, seg.end_heading()};
  }
  if (best.straight >= 0.0) {
    if (best.straight > 0.0) {
      edge.segments.push_back({cursor.xy(), cursor.psi, 0.0, best.straight});
    }
  } else if (best.arc2 > 0.0) {
    edge.segments.push_back({cursor.xy(), cursor.psi, -k1, turn_radius * best.arc2});
  }
  if (edge.segments.empty()) return std::nullopt;
  edge.length = 0.0;
  for (const PathSegment& seg : edge.segments) edge.length += seg.length;
  return edge;
}

EdgeGeometry truncate_edge(const EdgeGeometry& edge, double s) {
  if (s >= edge.length) return edge;
  EdgeGeometry out;
  out.z_start = edge.z_start;
  out.z_end = edge.pose_at(s).z;
  double remaining = s;
  for (const PathSegment& seg : edge.segments) {
    if (remaining <= 0.0) break;
    PathSegment cut = seg;
    cut.length = std::min(seg.length, remaining);
    out.segments.push_back(cut);
    remaining -= cut.length;
  }
  out.length = 0.0;
  for (const PathSegment& seg : out.segments) out.length += seg.length;
  return out;
}

bool edge_inside_bounds(const EdgeGeometry& edge, const Bounds& bounds, double spacing) {
  const int n = std::max(2, static_cast<int>(std::ceil(edge.length / spacing)) + 1);
  for (int i = 0; i < n; ++i) {
    const double s = edge.length * static_cast<double>(i) / (n - 1);
    if (!bounds.contains(edge.pose_at(s))) return false;
  }
  return true;
}

std::optional<SteerResult> steer(const Pose& from, const Pose& to, double extend_distance,
                                 const Bounds& bounds, double turn_radius) {
  std::optional<EdgeGeometry> path = dubins_to_point(from.xy(), from.psi, to.xy(), turn_radius);
  if (!path) return std::nullopt;
  const double full_length = path->length;
  path->z_start = from.z;
  path->z_end = to.z;
  EdgeGeometry edge = *path;
  if (extend_distance < full_length) {
    const double z_cut = from.z + (extend_distance / full_length) * (to.z - from.z);
    edge = truncate_edge(*path, extend_distance);
    edge.z_end = z_cut;
  }
  if (edge.length <= 0.0) return std::nullopt;
  if (!edge_inside_bounds(edge, bounds)) return std::nullopt;
  return SteerResult{edge.end_pose(), edge};
}

std::optional<SteerResult> steer_full(const Pose& from, const Pose& to, const Bounds& bounds,
                                      double turn_radius) {
  return steer(from, to, std::numeric_limits<double>::infinity(), bounds, turn_radius);
}

namespace {

Vec2 left_of(double heading) { return {-std::sin(heading), std::cos(heading)}; }

struct CscWord {
  double arc1 = 0.0;
  double straight = 0.0;
  double arc2 = 0.0;
  int dir1 = 0;
  int dir2 = 0;
  double length() const { return arc1 + straight + arc2; }
};

EdgeGeometry build_csc(const Pose& a, const Pose& b, double r, const CscWord& w) {
  EdgeGeometry e;
  e.z_start = a.z;
  e.z_end = b.z;
  Pose cursor = a;
  auto push = [&](double curvature, double len) {
    if (len <= 1e-12) return;
    PathSegment seg{cursor.xy(), cursor.psi, curvature, len};
    e.segments.push_back(seg);
    const Vec2 end = seg.end();
    cursor = {end.x, end.y, 0.0, seg.end_heading()};
    e.length += len;
  };
  push(w.dir1 / r, w.arc1);
  push(0.0, w.straight);
  push(w.dir2 / r, w.arc2);
  return e;
}

}  // namespace

std::vector<EdgeGeometry> dubins_between_words(const Pose& a, const Pose& b, double turn_radius) {
  const double r = turn_radius;
  std::vector<CscWord> words;

  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      const Vec2 c1 = a.xy() + (s1 * r) * left_of(a.psi);
      const Vec2 c2 = b.xy() + (s2 * r) * left_of(b.psi);
      const Vec2 D = c2 - c1;
      const double d = norm(D);
      double theta;
      double straight;
      if (s1 == s2) {
        if (d < 1e-12) {
          theta = a.psi;
          straight = 0.0;
        } else {
          theta = std::atan2(D.y, D.x);
          straight = d;
        }
      } else {
        if (d < 2.0 * r) continue;  // cross tangent does not exist
        const double phi = std::atan2(D.y, D.x);
        const double shift = std::asin(2.0 * r / d);
        theta = (s1 > 0) ? phi + shift : phi - shift;
        straight = std::sqrt(std::max(d * d - 4.0 * r * r, 0.0));
      }
      CscWord w;
      w.dir1 = s1;
      w.dir2 = s2;
      w.arc1 = r * wrap_positive(s1 * (theta - a.psi));
      w.arc2 = r * wrap_positive(s2 * (b.psi - theta));
      w.straight = straight;
      words.push_back(w);
    }
  }
  std::sort(words.begin(), words.end(),
            [](const CscWord& x, const CscWord& y) { return x.length() < y.length(); });
  std::vector<EdgeGeometry> out;
  out.reserve(words.size());
  for (const CscWord& w : words) {
    EdgeGeometry e = build_csc(a, b, r, w);
    if (e.length > 1e-9) out.push_back(std::move(e));
  }
  return out;
}

std::optional<EdgeGeometry> dubins_between(const Pose& a, const Pose& b, double turn_radius) {
  std::vector<EdgeGeometry> words = dubins_between_words(a, b, turn_radius);
  if (words.empty()) return std::nullopt;
  return words.front();
}

}  // namespace ipp
