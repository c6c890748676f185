#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ipp/belief_map.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

/// Forward-mounted camera: pitched down from horizontal, symmetric
/// horizontal/vertical fields of view, detection limited to max_range.
struct CameraModel {
  double pitch_down = 0.0;  // rad below horizontal
  double hfov = 0.0;        // rad
  double vfov = 0.0;        // rad
  double max_range = 0.0;   // m, shared with the sensor model

  static CameraModel standard();  // 30 deg pitch, 36.9 deg FOV, 600 m
};

struct CellView {
  CellIndex cell = kInvalidCell;
  double range = 0.0;  // 3D sensor-to-cell-center distance, m
};

/// Cells observed from a pose or edge, each with its viewing range.
/// Cells are unique and sorted by index.
struct Footprint {
  std::vector<CellView> cells;

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
};

/// Ground-plane trace of the four frustum corner rays. Rays that do not
/// reach the ground within max_range are clipped at the ground-range arc.
/// Order: near-left, near-right, far-right, far-left.
std::array<Vec2, 4> frustum_ground_quad(const Pose& pose, const CameraModel& cam);

/// Exact membership test: does the camera at `pose` see the ground point?
bool sees_ground_point(const Pose& pose, const CameraModel& cam, Vec2 ground);

/// All map cells whose centers lie in the ground projection of the
/// frustum and within max_range, paired with 3D viewing distance.
/// Throws std::invalid_argument when pose.z <= 0.
Footprint project_footprint(const Pose& pose, const CameraModel& cam, const BeliefMap& map);

/// Union of sampled footprints along an edge; each cell keeps the minimum
/// viewing range over the samples that see it. Endpoints are included.
Footprint edge_footprint(const EdgeGeometry& edge, const CameraModel& cam, const BeliefMap& map,
                         int samples);

/// Sample count from the default density of one pose per cell_size/2 of
/// arc length.
int default_edge_samples(const EdgeGeometry& edge, const BeliefMap& map);

Footprint edge_footprint(const EdgeGeometry& edge, const CameraModel& cam, const BeliefMap& map);

}  // namespace ipp
