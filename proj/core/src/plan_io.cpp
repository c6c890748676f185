#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ipp/plan.hpp"

namespace ipp {

Pose Plan::pose_at_cost(double s) const {
  if (waypoints.empty()) return {};
  if (s <= waypoints.front().cost) return waypoints.front().pose;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double c0 = waypoints[i].cost;
    const double c1 = waypoints[i + 1].cost;
    if (s <= c1) {
      if (i < edges.size() && edges[i].length > 0.0) return edges[i].pose_at(s - c0);
      return waypoints[i + 1].pose;
    }
  }
  return waypoints.back().pose;
}

Plan densify_plan(const Plan& plan, double spacing) {
  if (spacing <= 0.0 || plan.waypoints.size() < 2) return plan;
  Plan out;
  out.total_info = plan.total_info;
  out.waypoints.push_back(plan.waypoints.front());
  for (std::size_t i = 0; i + 1 < plan.waypoints.size(); ++i) {
    const PlanWaypoint& a = plan.waypoints[i];
    const PlanWaypoint& b = plan.waypoints[i + 1];
    const EdgeGeometry& edge = plan.edges[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(edge.length / spacing)));
    double s_prev = 0.0;
    for (int k = 1; k <= pieces; ++k) {
      const double s = edge.length * k / pieces;
      // geometry of the [s_prev, s] span
      EdgeGeometry span;
      span.z_start = edge.pose_at(s_prev).z;
      span.z_end = edge.pose_at(s).z;
      double remaining = s - s_prev;
      double skip = s_prev;
      for (const PathSegment& seg : edge.segments) {
        if (remaining <= 0.0) break;
        if (skip >= seg.length) {
          skip -= seg.length;
          continue;
        }
        PathSegment cut = seg;
        const Vec2 start = seg.point_at(skip);
        cut.start = start;
        cut.heading = seg.heading_at(skip);
        cut.length = std::min(seg.length - skip, remaining);
        span.segments.push_back(cut);
        remaining -= cut.length;
        skip = 0.0;
      }
      span.length = 0.0;
      for (const PathSegment& seg : span.segments) span.length += seg.length;

      PlanWaypoint wp;
      const Pose pose = edge.pose_at(s);
      wp.pose = pose;
      wp.cost = a.cost + s;
      wp.info = k == pieces ? b.info : a.info;
      wp.node = k == pieces ? b.node : false;
      out.edges.push_back(std::move(span));
      out.waypoints.push_back(wp);
      s_prev = s;
    }
  }
  return out;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

void expect(std::istream& is, const char* key) {
  std::string k;
  is >> k;
  if (k != key) throw std::runtime_error(std::string("plan io: expected ") + key);
}

void write_pose(std::ostream& os, const Pose& p) {
  put(os, p.x);
  os << ' ';
  put(os, p.y);
  os << ' ';
  put(os, p.z);
  os << ' ';
  put(os, p.psi);
}

Pose read_pose(std::istream& is) {
  Pose p;
  is >> p.x >> p.y >> p.z >> p.psi;
  return p;
}

}  // namespace

void save_plan(std::ostream& os, const Plan& plan) {
  os << "plan 1\n";
  os << "total_info ";
  put(os, plan.total_info);
  os << "\nwaypoints " << plan.waypoints.size() << "\n";
  for (const PlanWaypoint& wp : plan.waypoints) {
    write_pose(os, wp.pose);
    os << ' ';
    put(os, wp.cost);
    os << ' ';
    put(os, wp.info);
    os << ' ' << (wp.node ? 1 : 0) << "\n";
  }
  os << "edges " << plan.edges.size() << "\n";
  for (const EdgeGeometry& e : plan.edges) {
    os << "edge " << e.segments.size() << ' ';
    put(os, e.z_start);
    os << ' ';
    put(os, e.z_end);
    os << "\n";
    for (const PathSegment& seg : e.segments) {
      put(os, seg.start.x);
      os << ' ';
      put(os, seg.start.y);
      os << ' ';
      put(os, seg.heading);
      os << ' ';
      put(os, seg.curvature);
      os << ' ';
      put(os, seg.length);
      os << "\n";
    }
  }
}

Plan load_plan(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "plan" || version != 1) throw std::runtime_error("plan io: bad header");
  Plan plan;
  expect(is, "total_info");
  is >> plan.total_info;
  expect(is, "waypoints");
  std::size_t n_wp = 0;
  is >> n_wp;
  plan.waypoints.resize(n_wp);
  for (PlanWaypoint& wp : plan.waypoints) {
    wp.pose = read_pose(is);
    int node = 1;
    is >> wp.cost >> wp.info >> node;
    wp.node = node != 0;
  }
  expect(is, "edges");
  std::size_t n_edges = 0;
  is >> n_edges;
  plan.edges.resize(n_edges);
  for (EdgeGeometry& e : plan.edges) {
    expect(is, "edge");
    std::size_t n_segs = 0;
    is >> n_segs >> e.z_start >> e.z_end;
    e.segments.resize(n_segs);
    e.length = 0.0;
    for (PathSegment& seg : e.segments) {
      is >> seg.start.x >> seg.start.y >> seg.heading >> seg.curvature >> seg.length;
      e.length += seg.length;
    }
  }
  if (!is) throw std::runtime_error("plan io: truncated plan");
  return plan;
}

void save_plan_request(std::ostream& os, const PlanRequest& req) {
  os << "plan_request 1\n";
  os << "start ";
  write_pose(os, req.start);
  os << "\nbudget ";
  put(os, req.budget);
  os << "\nbounds ";
  put(os, req.bounds.x_min);
  os << ' ';
  put(os, req.bounds.y_min);
  os << ' ';
  put(os, req.bounds.x_max);
  os << ' ';
  put(os, req.bounds.y_max);
  os << "\n";
  req.map.save(os);
}

PlanRequest load_plan_request(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "plan_request" || version != 1) throw std::runtime_error("plan request io: bad header");
  PlanRequest req;
  expect(is, "start");
  req.start = read_pose(is);
  expect(is, "budget");
  is >> req.budget;
  expect(is, "bounds");
  is >> req.bounds.x_min >> req.bounds.y_min >> req.bounds.x_max >> req.bounds.y_max;
  req.map = BeliefMap::load(is);
  return req;
}

}  // namespace ipp
