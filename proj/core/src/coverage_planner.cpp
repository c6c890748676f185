#include <cmath>
#include <stdexcept>

#include "ipp/baselines.hpp"
#include "ipp/dubins.hpp"

namespace ipp {

double coverage_row_spacing(const CameraModel& cam, double altitude) {
  const Pose canonical{0.0, 0.0, altitude, 0.0};
  const std::array<Vec2, 4> quad = frustum_ground_quad(canonical, cam);
  const double w_near = norm(quad[1] - quad[0]);
  const double w_far = norm(quad[2] - quad[3]);
  return w_near + 0.2 * (w_far - w_near);
}

namespace {

void append_edge(Plan& plan, const EdgeGeometry& edge) {
  const PlanWaypoint& last = plan.waypoints.back();
  plan.edges.push_back(edge);
  Pose end = edge.end_pose();
  end.z = last.pose.z;
  plan.waypoints.push_back({end, last.cost + edge.length, 0.0});
}

// Full circle anchored at the current pose, turning whichever way stays
// inside the bounds.
void append_loiter(Plan& plan, const Bounds& bounds, double r) {
  const Pose at = plan.waypoints.back().pose;
  for (int dir : {1, -1}) {
    EdgeGeometry loop = make_arc_edge(at, dir / r, 2.0 * kPi * r, at.z);
    if (edge_inside_bounds(loop, bounds)) {
      append_edge(plan, loop);
      return;
    }
  }
}

void append_turn(Plan& plan, const Pose& to, const Bounds& bounds, double r) {
  const Pose from = plan.waypoints.back().pose;
  const std::vector<EdgeGeometry> words = dubins_between_words(from, to, r);
  for (const EdgeGeometry& e : words) {
    if (edge_inside_bounds(e, bounds)) {
      append_edge(plan, e);
      return;
    }
  }
  if (!words.empty()) append_edge(plan, words.front());
}

}  // namespace

Plan coverage_pattern(const Bounds& bounds, const CameraModel& cam, double altitude,
                      double turn_radius) {
  if (bounds.width() <= 0.0 || bounds.height() <= 0.0) {
    throw std::invalid_argument("coverage_pattern: degenerate bounds");
  }
  const double spacing = coverage_row_spacing(cam, altitude);
  // Wider-than-minimum turns sweep the camera across the boundary strips
  // that the rows' forward-offset footprints cannot reach.
  const double turn_r = std::max(turn_radius, spacing);
  const double inset = turn_r;
  const double x0 = bounds.x_min + inset;
  const double x1 = bounds.x_max - inset;
  if (x1 <= x0) throw std::invalid_argument("coverage_pattern: bounds narrower than two turns");

  const int n_rows = static_cast<int>(std::ceil(bounds.height() / spacing));

  Plan plan;
  const double y_first = std::min(bounds.y_min + spacing / 2.0, bounds.y_max);
  plan.waypoints.push_back({{x0, y_first, altitude, 0.0}, 0.0, 0.0});
  append_loiter(plan, bounds, turn_r);

  for (int k = 0; k < n_rows; ++k) {
    const double y = std::min(bounds.y_min + spacing / 2.0 + k * spacing, bounds.y_max);
    const bool forward = (k % 2 == 0);
    const Pose row_start{forward ? x0 : x1, y, altitude, forward ? 0.0 : kPi};
    if (k > 0) append_turn(plan, row_start, bounds, turn_r);
    EdgeGeometry row;
    row.segments.push_back({row_start.xy(), row_start.psi, 0.0, x1 - x0});
    row.length = x1 - x0;
    row.z_start = row.z_end = altitude;
    append_edge(plan, row);
  }

  // Cap columns along both side walls: their lateral swath reaches the
  // strips the rows' forward-offset footprints leave behind at the row
  // ends.
  const double y_lo = bounds.y_min + inset;
  const double y_hi = bounds.y_max - inset;
  if (y_hi > y_lo) {
    const Pose cap_right{x1, y_hi, altitude, -kPi / 2.0};
    append_turn(plan, cap_right, bounds, turn_r);
    EdgeGeometry down;
    down.segments.push_back({cap_right.xy(), cap_right.psi, 0.0, y_hi - y_lo});
    down.length = y_hi - y_lo;
    down.z_start = down.z_end = altitude;
    append_edge(plan, down);

    const Pose cap_left{x0, y_lo, altitude, kPi / 2.0};
    append_turn(plan, cap_left, bounds, turn_r);
    EdgeGeometry up;
    up.segments.push_back({cap_left.xy(), cap_left.psi, 0.0, y_hi - y_lo});
    up.length = y_hi - y_lo;
    up.z_start = up.z_end = altitude;
    append_edge(plan, up);
  }
  append_loiter(plan, bounds, turn_r);
  return plan;
}

Plan truncate_plan(const Plan& plan, double budget) {
  Plan out;
  if (plan.waypoints.empty()) return out;
  out.waypoints.push_back(plan.waypoints.front());
  for (std::size_t i = 0; i + 1 < plan.waypoints.size(); ++i) {
    const PlanWaypoint& next = plan.waypoints[i + 1];
    if (next.cost <= budget) {
      out.edges.push_back(plan.edges[i]);
      out.waypoints.push_back(next);
      continue;
    }
    const double remaining = budget - out.waypoints.back().cost;
    if (remaining > 1e-9) {
      EdgeGeometry cut = truncate_edge(plan.edges[i], remaining);
      Pose end = cut.end_pose();
      end.z = out.waypoints.back().pose.z;
      out.edges.push_back(cut);
      out.waypoints.push_back({end, budget, out.waypoints.back().info});
    }
    break;
  }
  out.total_info = out.waypoints.back().info;
  return out;
}

CoveragePlanner::CoveragePlanner(const CameraModel& cam, CoverageConfig config)
    : cam_(cam), config_(std::move(config)) {}

Plan CoveragePlanner::plan(const PlanRequest& request) {
  const Plan pattern =
      coverage_pattern(request.bounds, cam_, config_.altitude, config_.turn_radius);

  Plan full;
  full.waypoints.push_back({request.start, 0.0, 0.0});
  const Pose entry = pattern.waypoints.front().pose;
  if (horizontal_distance(request.start, entry) > 1e-6) {
    bool connected = false;
    for (const EdgeGeometry& e :
         dubins_between_words(request.start, entry, config_.turn_radius)) {
      if (edge_inside_bounds(e, request.bounds)) {
        append_edge(full, e);
        connected = true;
        break;
      }
    }
    if (!connected) {
      const auto direct = dubins_to_point(request.start.xy(), request.start.psi, entry.xy(),
                                          config_.turn_radius);
      if (direct) {
        EdgeGeometry e = *direct;
        e.z_start = request.start.z;
        e.z_end = entry.z;
        append_edge(full, e);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < pattern.waypoints.size(); ++i) {
    append_edge(full, pattern.edges[i]);
  }
  return truncate_plan(full, request.budget);
}

}  // namespace ipp
