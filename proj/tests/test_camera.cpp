#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>

#include "ipp/camera.hpp"

using namespace ipp;

namespace {

CameraModel nadir_cam() {
  CameraModel cam = CameraModel::standard();
  cam.pitch_down = kPi / 2.0;
  return cam;
}

}  // namespace

TEST_CASE("nadir footprint is a square under the pose") {
  const CameraModel cam = nadir_cam();
  // 1 m cells centred on the pose.
  BeliefMap map({-30.0, -30.0}, 1.0, 60, 60);
  const Pose pose{0.0, 0.0, 50.0, 0.0};
  const Footprint fp = project_footprint(pose, cam, map);

  const double half = 50.0 * std::tan(deg_to_rad(36.9) / 2.0);
  CHECK(half == doctest::Approx(16.681261978).epsilon(1e-9));

  // Cell centers at +-16.5 are inside, +-17.5 outside: 34 x 34 cells.
  CHECK(fp.size() == 34 * 34);
  for (const CellView& cv : fp.cells) {
    const Vec2 c = map.cell_center(cv.cell);
    CHECK(std::abs(c.x) <= half);
    CHECK(std::abs(c.y) <= half);
    CHECK(cv.range ==
          doctest::Approx(std::sqrt(2500.0 + c.x * c.x + c.y * c.y)).epsilon(1e-12));
  }
}

TEST_CASE("forward footprint near and far edges") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, -100.0}, 1.0, 200, 300);
  const Pose pose{0.0, 0.0, 50.0, 0.0};
  const Footprint fp = project_footprint(pose, cam, map);
  REQUIRE(!fp.empty());

  double x_min = 1e9, x_max = -1e9;
  for (const CellView& cv : fp.cells) {
    const Vec2 c = map.cell_center(cv.cell);
    x_min = std::min(x_min, c.x);
    x_max = std::max(x_max, c.x);
    CHECK(cv.range <= cam.max_range + 1e-9);
  }
  // Ground distances of the frustum's near and far boundary rays.
  CHECK(x_min == doctest::Approx(44.314).epsilon(0.03));
  CHECK(x_max == doctest::Approx(244.665).epsilon(0.01));

  const auto quad = frustum_ground_quad(pose, cam);
  CHECK(quad[0].x == doctest::Approx(quad[1].x).epsilon(1e-9));  // near edge straight
  CHECK(quad[2].x == doctest::Approx(quad[3].x).epsilon(1e-9));
}

TEST_CASE("pose below ground and off-map footprints") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, 0.0}, 10.0, 10, 10);
  CHECK_THROWS_AS(project_footprint({0.0, 0.0, 0.0, 0.0}, cam, map), std::invalid_argument);
  CHECK_THROWS_AS(project_footprint({0.0, 0.0, -5.0, 0.0}, cam, map), std::invalid_argument);

  // Pose far outside the map, looking away: nothing to see.
  const Footprint fp = project_footprint({-5000.0, -5000.0, 50.0, kPi}, cam, map);
  CHECK(fp.empty());
}

TEST_CASE("horizon-grazing rays clip at the range arc") {
  CameraModel cam = CameraModel::standard();
  cam.pitch_down = deg_to_rad(10.0);  // top rays point above horizontal
  BeliefMap map({0.0, -700.0}, 10.0, 140, 140);
  const Pose pose{0.0, 0.0, 50.0, 0.0};
  const Footprint fp = project_footprint(pose, cam, map);
  REQUIRE(!fp.empty());
  const double ground_reach = std::sqrt(cam.max_range * cam.max_range - 2500.0);
  for (const CellView& cv : fp.cells) {
    CHECK(cv.range <= cam.max_range + 1e-9);
    CHECK(norm(map.cell_center(cv.cell)) <= ground_reach + 8.0);
  }
}

TEST_CASE("edge footprint merges samples with minimum range") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, -300.0}, 5.0, 120, 200);

  EdgeGeometry edge;
  edge.segments.push_back({{0.0, 0.0}, 0.0, 0.0, 400.0});
  edge.length = 400.0;
  edge.z_start = edge.z_end = 50.0;

  const int samples = 41;
  const Footprint fp = edge_footprint(edge, cam, map, samples);

  // Brute force: min over per-sample projections.
  std::map<CellIndex, double> expect;
  for (int i = 0; i < samples; ++i) {
    const double s = edge.length * i / (samples - 1);
    for (const CellView& cv : project_footprint(edge.pose_at(s), cam, map).cells) {
      auto [it, fresh] = expect.emplace(cv.cell, cv.range);
      if (!fresh) it->second = std::min(it->second, cv.range);
    }
  }
  REQUIRE(fp.size() == expect.size());
  for (const CellView& cv : fp.cells) {
    REQUIRE(expect.count(cv.cell) == 1);
    CHECK(cv.range == doctest::Approx(expect[cv.cell]).epsilon(1e-12));
  }

  // Includes both endpoint footprints.
  for (const Pose& p : {edge.pose_at(0.0), edge.pose_at(edge.length)}) {
    for (const CellView& cv : project_footprint(p, cam, map).cells) {
      REQUIRE(expect.count(cv.cell) == 1);
      CHECK(expect[cv.cell] <= cv.range + 1e-12);
    }
  }
}

TEST_CASE("denser sampling never increases stored ranges") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, -300.0}, 15.0, 40, 60);
  EdgeGeometry edge;
  edge.segments.push_back({{10.0, -50.0}, 0.4, 1.0 / 150.0, 350.0});
  edge.length = 350.0;
  edge.z_start = edge.z_end = 50.0;

  const int n = 15;
  const Footprint coarse = edge_footprint(edge, cam, map, n);
  const Footprint fine = edge_footprint(edge, cam, map, 2 * n - 1);  // nested refinement

  std::map<CellIndex, double> fine_ranges;
  for (const CellView& cv : fine.cells) fine_ranges[cv.cell] = cv.range;
  for (const CellView& cv : coarse.cells) {
    REQUIRE(fine_ranges.count(cv.cell) == 1);
    CHECK(fine_ranges[cv.cell] <= cv.range + 1e-12);
  }
}

TEST_CASE("zero-length edge degenerates to the pose footprint") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, -300.0}, 10.0, 60, 60);
  EdgeGeometry edge;
  edge.segments.push_back({{50.0, 0.0}, 0.7, 0.0, 0.0});
  edge.z_start = edge.z_end = 50.0;
  edge.length = 0.0;

  const Footprint a = edge_footprint(edge, cam, map, 5);
  const Footprint b = project_footprint({50.0, 0.0, 50.0, 0.7}, cam, map);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.cells[i].cell == b.cells[i].cell);
    CHECK(a.cells[i].range == doctest::Approx(b.cells[i].range));
  }
}

TEST_CASE("lateral offset increases stored range along a straight edge") {
  const CameraModel cam = CameraModel::standard();
  BeliefMap map({0.0, -300.0}, 5.0, 120, 200);
  EdgeGeometry edge;
  edge.segments.push_back({{0.0, 0.0}, 0.0, 0.0, 400.0});
  edge.length = 400.0;
  edge.z_start = edge.z_end = 50.0;
  const Footprint fp = edge_footprint(edge, cam, map, 81);

  std::map<CellIndex, double> ranges;
  for (const CellView& cv : fp.cells) ranges[cv.cell] = cv.range;

  // Same along-track station, growing lateral offset.
  const CellIndex mid0 = map.cell_at({202.5, 2.5});
  const CellIndex mid1 = map.cell_at({202.5, 27.5});
  const CellIndex mid2 = map.cell_at({202.5, 52.5});
  REQUIRE(ranges.count(mid0) == 1);
  REQUIRE(ranges.count(mid1) == 1);
  REQUIRE(ranges.count(mid2) == 1);
  CHECK(ranges[mid0] < ranges[mid1]);
  CHECK(ranges[mid1] < ranges[mid2]);

  // A cell past the edge's end is stuck with a longer viewing distance
  // than one beside the midpoint at the same lateral offset.
  const CellIndex past_end = map.cell_at({602.5, 52.5});
  REQUIRE(ranges.count(past_end) == 1);
  CHECK(ranges[mid2] < ranges[past_end]);
}
