#pragma once

#include <optional>

#include "ipp/geometry.hpp"

namespace ipp {

/// Shortest curvature-bounded planar path from (start, heading) to a
/// target point with free terminal heading. The minimum is an arc, an
/// arc + straight, or two opposite arcs; all candidate words are
/// enumerated and the shortest kept. Returns nullopt when the target
/// coincides with the start.
std::optional<EdgeGeometry> dubins_to_point(Vec2 start, double heading, Vec2 target,
                                            double turn_radius);

struct SteerResult {
  Pose pose;           // reached pose; heading = path tangent
  EdgeGeometry edge;   // geometry from `from` to `pose`
};

/// Curvature-bounded steer toward `to`, truncated at arc length
/// `extend_distance`, with a linear altitude blend. The whole planar path
/// must stay inside `bounds` (checked at <= 1 m spacing). The target's
/// heading only defines its viewing geometry and is not tracked.
std::optional<SteerResult> steer(const Pose& from, const Pose& to, double extend_distance,
                                 const Bounds& bounds, double turn_radius);

/// Variant without the extend-distance cap (full minimum-length path).
std::optional<SteerResult> steer_full(const Pose& from, const Pose& to, const Bounds& bounds,
                                      double turn_radius);

/// True when every point of the planar path, sampled at `spacing`, lies
/// inside the bounds.
bool edge_inside_bounds(const EdgeGeometry& edge, const Bounds& bounds, double spacing = 1.0);

/// Prefix of an edge up to arc length s (altitude re-blends over the
/// truncated length toward the pose at s on the original profile).
EdgeGeometry truncate_edge(const EdgeGeometry& edge, double s);

/// Arc-straight-arc connectors between two full poses (headings fixed at
/// both ends), sorted by length. Altitude blends linearly.
std::vector<EdgeGeometry> dubins_between_words(const Pose& a, const Pose& b, double turn_radius);

/// Shortest arc-straight-arc connector, or nullopt for degenerate input.
std::optional<EdgeGeometry> dubins_between(const Pose& a, const Pose& b, double turn_radius);

}  // namespace ipp
