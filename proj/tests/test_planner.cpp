#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "ipp/planner.hpp"
#include "ipp/scenarios.hpp"

using namespace ipp;

namespace {

PlannerConfig desk_config(std::uint64_t seed, int iterations) {
  PlannerConfig cfg = desk_scenario().planner;
  cfg.seed = seed;
  cfg.iterations_per_cycle = iterations;
  return cfg;
}

BeliefMap desk_map(double p0 = 0.0) {
  return BeliefMap({0.0, 0.0}, 15.0, 67, 67, p0);
}

BeliefMap blob_map(Vec2 center, double radius, double p = 0.5) {
  BeliefMap map = desk_map(0.0);
  for (CellIndex i = 0; i < map.size(); ++i) {
    if (norm(map.cell_center(i) - center) <= radius) map.set_prob(i, p);
  }
  return map;
}

std::string plan_text(const Plan& plan) {
  std::ostringstream os;
  save_plan(os, plan);
  return os.str();
}

}  // namespace

TEST_CASE("informed sampler always views the forced cell") {
  const Scenario sc = desk_scenario();
  BeliefMap map = desk_map(0.0);
  map.set_prob(map.cell_at({500.0, 500.0}), 0.5);  // single rewarded cell
  int nonzero = 0;
  for (CellIndex i = 0; i < map.size(); ++i) nonzero += map.prob(i) > 0.0;
  REQUIRE(nonzero == 1);

  const InformedSampler sampler(map, sc.cam, sc.sensor, {50.0}, 0.0);
  REQUIRE(sampler.has_reward());
  std::mt19937_64 rng(5);
  const CellIndex target = map.cell_at({500.0, 500.0});
  const Bounds bounds = map.extent();
  for (int i = 0; i < 50; ++i) {
    const Pose pose = sampler.sample(bounds, rng);
    const Footprint fp = project_footprint(pose, sc.cam, map);
    bool found = false;
    for (const CellView& cv : fp.cells) found |= cv.cell == target;
    CHECK(found);
  }
}

TEST_CASE("informed sampler draws cells proportionally to reward") {
  const Scenario sc = desk_scenario();
  BeliefMap map = desk_map(0.0);
  const CellIndex a = map.cell_index(10, 10);
  const CellIndex b = map.cell_index(50, 50);
  map.set_prob(a, 0.5);
  map.set_prob(b, 0.5);
  map.set_priority(a, 0.9);
  map.set_priority(b, 0.1);

  const InformedSampler sampler(map, sc.cam, sc.sensor, {50.0}, 0.0);
  std::mt19937_64 rng(11);
  int hits_a = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) hits_a += sampler.sample_cell(rng) == a;
  CHECK(hits_a / static_cast<double>(draws) == doctest::Approx(0.9).epsilon(0.025));
}

TEST_CASE("informed sampler falls back to uniform poses on certain maps") {
  const Scenario sc = desk_scenario();
  BeliefMap map = desk_map(0.0);  // everything certain-empty
  const InformedSampler sampler(map, sc.cam, sc.sensor, {50.0}, 0.0);
  CHECK_FALSE(sampler.has_reward());

  std::mt19937_64 rng(13);
  const Bounds bounds = map.extent();
  double mx = 0.0, my = 0.0;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    const Pose p = sampler.sample(bounds, rng);
    CHECK(bounds.contains(p));
    mx += p.x;
    my += p.y;
  }
  // Uniform marginals center on the bounds midpoint.
  CHECK(mx / draws == doctest::Approx(502.5).epsilon(0.03));
  CHECK(my / draws == doctest::Approx(502.5).epsilon(0.03));
}

TEST_CASE("plan on a zero-reward map degenerates to the root") {
  const Scenario sc = desk_scenario();
  InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(3, 50));
  BeliefMap map = desk_map(0.0);
  const Plan plan = planner.plan({{100, 100, 50, 0}, 3000.0, map, map.extent()});
  CHECK(plan.total_info == doctest::Approx(0.0));
  CHECK(plan.waypoints.size() == 1);
  CHECK(plan.total_cost() == 0.0);
}

TEST_CASE("plan rejects a start outside the bounds") {
  const Scenario sc = desk_scenario();
  InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(3, 10));
  BeliefMap map = desk_map(0.2);
  CHECK_THROWS_AS(planner.plan({{-50, 100, 50, 0}, 3000.0, map, map.extent()}),
                  std::invalid_argument);
}

TEST_CASE("plans respect the budget and curvature bound") {
  const Scenario sc = desk_scenario();
  std::mt19937_64 env_rng(17);
  std::uniform_real_distribution<double> up(0.0, 0.5);
  for (int seed = 0; seed < 12; ++seed) {
    BeliefMap map = desk_map(0.0);
    for (CellIndex i = 0; i < map.size(); ++i) map.set_prob(i, up(env_rng));
    InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(seed, 80));
    const Plan plan = planner.plan({{100, 100, 50, 0.3}, 3000.0, map, map.extent()});
    CHECK(plan.total_cost() <= 3000.0 + 1e-6);

    double prev_cost = -1.0;
    for (const PlanWaypoint& wp : plan.waypoints) {
      CHECK(wp.cost >= prev_cost);
      prev_cost = wp.cost;
      CHECK(map.extent().contains(wp.pose));
    }
    for (const EdgeGeometry& e : plan.edges) {
      for (const PathSegment& seg : e.segments) {
        CHECK(std::abs(seg.curvature) <= 1.0 / sc.planner.turn_radius + 1e-12);
      }
      const int n = std::max(2, static_cast<int>(e.length) + 1);
      for (int i = 0; i < n; ++i) {
        CHECK(map.extent().contains(e.pose_at(e.length * i / (n - 1))));
      }
    }
  }
}

TEST_CASE("more iterations never lose information (anytime behavior)") {
  const Scenario sc = desk_scenario();
  BeliefMap map = blob_map({600.0, 600.0}, 150.0);
  double prev = -1.0;
  for (const int iters : {40, 80, 160}) {
    InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(99, iters));
    const Plan plan = planner.plan({{100, 100, 50, 0}, 3000.0, map, map.extent()});
    CHECK(plan.total_info >= prev - 1e-12);
    prev = plan.total_info;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("fixed seed and iteration budget give identical plans") {
  const Scenario sc = desk_scenario();
  BeliefMap map = blob_map({650.0, 400.0}, 120.0);
  const PlanRequest req{{100, 100, 50, 0}, 3000.0, map, map.extent()};

  InformedTreePlanner p1(sc.cam, sc.sensor, desk_config(1234, 150));
  InformedTreePlanner p2(sc.cam, sc.sensor, desk_config(1234, 150));
  const Plan a = p1.plan(req);
  const Plan b = p2.plan(req);
  CHECK(plan_text(a) == plan_text(b));
  CHECK(a.total_info > 0.0);
}

TEST_CASE("update_graph recycles a matched start") {
  const Scenario sc = desk_scenario();
  BeliefMap map = blob_map({650.0, 650.0}, 150.0);
  InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(7, 300));
  const PlanRequest req{{100, 100, 50, deg_to_rad(45)}, 3000.0, map, map.extent()};
  const Plan first = planner.plan(req);
  REQUIRE(first.waypoints.size() >= 3);
  const std::size_t before = planner.tree().size();

  SUBCASE("same root pose, unchanged map and budget") {
    const bool recycled = planner.update_graph(req.start, 3000.0, map);
    CHECK(recycled);
    CHECK(planner.tree().size() == before);
    CHECK(planner.last_update_stats().visited == static_cast<int>(before));
  }

  SUBCASE("mid-plan waypoint becomes the new root") {
    const PlanWaypoint& wp = first.waypoints[2];
    const double remaining = 3000.0 - wp.cost;
    const bool recycled = planner.update_graph(wp.pose, remaining, map);
    CHECK(recycled);
    const PlanTree& tree = planner.tree();
    CHECK(spatial_distance(tree.node(tree.root()).pose, wp.pose) < 1e-9);
    CHECK(tree.node(tree.root()).cost == 0.0);
    for (const NodeId id : tree.alive_nodes()) {
      CHECK(tree.node(id).cost <= remaining + 1e-9);
    }
  }

  SUBCASE("unmatched start falls back to a fresh tree") {
    const Pose off{500.0, 107.0, 50.0, 1.1};
    const bool recycled = planner.update_graph(off, 2000.0, map);
    CHECK_FALSE(recycled);
    CHECK(planner.tree().size() == 1);
    CHECK(spatial_distance(planner.tree().node(planner.tree().root()).pose, off) < 1e-9);
  }
}

TEST_CASE("planner covers a reward blob") {
  const Scenario sc = desk_scenario();
  const Vec2 blob_center{700.0, 500.0};
  const double blob_radius = 90.0;
  BeliefMap map = blob_map(blob_center, blob_radius);
  InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(21, 600));
  const Plan plan = planner.plan({{100, 500, 50, 0}, 3000.0, map, map.extent()});
  REQUIRE(plan.waypoints.size() >= 2);

  std::unordered_set<CellIndex> seen;
  for (const EdgeGeometry& e : plan.edges) {
    for (const CellView& cv : edge_footprint(e, sc.cam, map).cells) seen.insert(cv.cell);
  }
  int blob_cells = 0, covered = 0;
  for (CellIndex i = 0; i < map.size(); ++i) {
    if (map.prob(i) >= 0.5) {
      ++blob_cells;
      covered += seen.count(i) > 0;
    }
  }
  REQUIRE(blob_cells > 50);
  CHECK(covered >= static_cast<int>(0.9 * blob_cells));
}

TEST_CASE("replay helper matches tree bookkeeping") {
  const Scenario sc = desk_scenario();
  BeliefMap map = blob_map({500.0, 600.0}, 200.0, 0.4);
  InformedTreePlanner planner(sc.cam, sc.sensor, desk_config(31, 200));
  planner.plan({{100, 100, 50, 0}, 3000.0, map, map.extent()});
  const PlanTree& tree = planner.tree();
  const RewardContext ctx{&map, &sc.sensor, DecayFunction::none(), sc.planner.speed};
  for (const NodeId id : tree.alive_nodes()) {
    const ReplayResult r = replay_node_info(tree, id, ctx);
    CHECK(std::abs(r.info - tree.node(id).info) <= 1e-9);
    CHECK(std::abs(r.cost - tree.node(id).cost) <= 1e-9);
  }
}
