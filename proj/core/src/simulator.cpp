#include "ipp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ipp {

std::vector<std::uint8_t> sample_truth(const BeliefMap& prior, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::uint8_t> truth(static_cast<std::size_t>(prior.size()));
  for (CellIndex idx = 0; idx < prior.size(); ++idx) {
    truth[static_cast<std::size_t>(idx)] = u(rng) < prior.prob(idx) ? 1 : 0;
  }
  return truth;
}

void step(MissionState& state, const SimConfig& config, double dt) {
  if (state.complete || state.plan.waypoints.empty()) {
    state.complete = true;
    return;
  }
  // Waypoint switching first, and at most once per step. A waypoint also
  // counts as reached once the vehicle crosses the half-plane through it
  // perpendicular to the leg; otherwise a turn-limited vehicle can orbit
  // a waypoint inside its own turning circle forever.
  {
    const Pose& wp = state.plan.waypoints[state.waypoint_index].pose;
    bool reached = horizontal_distance(state.vehicle.pose, wp) <= config.accept_radius;
    if (!reached && state.waypoint_index > 0) {
      const Pose& prev = state.plan.waypoints[state.waypoint_index - 1].pose;
      const Vec2 leg = wp.xy() - prev.xy();
      const double len = norm(leg);
      // Zero-length legs (loiter boundaries, merge duplicates) carry no
      // tracking geometry; treat them as already passed.
      reached = len <= 1e-9 ||
                dot(state.vehicle.pose.xy() - wp.xy(), (1.0 / len) * leg) > 0.0;
    }
    if (reached) {
      ++state.waypoint_index;
      if (state.waypoint_index >= state.plan.waypoints.size()) {
        state.complete = true;
        return;
      }
    }
  }
  const Pose& wp = state.plan.waypoints[state.waypoint_index].pose;
  Pose& pose = state.vehicle.pose;

  const double desired = std::atan2(wp.y - pose.y, wp.x - pose.x);
  const double err = wrap_angle(desired - pose.psi);
  const double max_rate = state.vehicle.speed / config.turn_radius;
  const double rate = std::clamp(config.heading_gain * err, -max_rate, max_rate);
  pose.psi = wrap_angle(pose.psi + rate * dt);

  const double climb =
      std::clamp(config.altitude_gain * (wp.z - pose.z), -config.climb_rate_limit,
                 config.climb_rate_limit);
  pose.z += climb * dt;

  pose.x += state.vehicle.speed * dt * std::cos(pose.psi);
  pose.y += state.vehicle.speed * dt * std::sin(pose.psi);
  state.vehicle.distance_flown += state.vehicle.speed * dt;
}

bool is_banking(const MissionState& state, const SimConfig& config) {
  if (state.complete || state.plan.waypoints.empty()) return false;
  const std::size_t i = std::min(state.waypoint_index, state.plan.waypoints.size() - 1);
  const Pose& wp = state.plan.waypoints[i].pose;
  const Pose& pose = state.vehicle.pose;
  if (horizontal_distance(pose, wp) < 1e-9) return false;
  const double desired = std::atan2(wp.y - pose.y, wp.x - pose.x);
  return std::abs(wrap_angle(desired - pose.psi)) > config.banking_threshold;
}

int observe(MissionState& state, const CameraModel& cam, const SensorModel& model,
            const SimConfig& config, std::mt19937_64& rng) {
  if (is_banking(state, config)) return 0;
  const Footprint fp = project_footprint(state.vehicle.pose, cam, state.belief);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int updated = 0;
  for (const CellView& cv : fp.cells) {
    const DetectionRates rates = model.lookup(cv.range);
    const bool occupied = state.truth[static_cast<std::size_t>(cv.cell)] != 0;
    const double p_positive = occupied ? rates.tpr : 1.0 - rates.tnr;
    const bool positive = u(rng) < p_positive;
    const double prior = state.belief.prob(cv.cell);
    const double post = clamp_stored_prob(bayes_posterior(prior, positive, rates.tpr, rates.tnr));
    if (post != prior) {
      state.current_entropy += entropy(post) - entropy(prior);
      state.belief.update_prob(cv.cell, post);
    }
    ++updated;
  }
  return updated;
}

namespace {

std::size_t nearest_waypoint(const Plan& plan, const Pose& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
    const double d = spatial_distance(plan.waypoints[i].pose, p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void append_fresh(Plan& out, const Plan& fresh, bool skip_first) {
  const double cost0 = out.waypoints.back().cost;
  const double info0 = out.waypoints.back().info;
  const double fresh_cost0 = fresh.waypoints.front().cost;
  const double fresh_info0 = fresh.waypoints.front().info;
  for (std::size_t k = skip_first ? 1 : 0; k < fresh.waypoints.size(); ++k) {
    const PlanWaypoint& wp = fresh.waypoints[k];
    if (k > 0) out.edges.push_back(fresh.edges[k - 1]);
    out.waypoints.push_back(
        {wp.pose, cost0 + (wp.cost - fresh_cost0), info0 + (wp.info - fresh_info0), wp.node});
  }
  out.total_info = out.waypoints.back().info;
}

}  // namespace

MergeOutcome merge_plan(const Plan& current, const Plan& fresh, const Pose& merge_pose,
                        double pos_tol, double heading_tol) {
  if (fresh.waypoints.empty()) return {current, false};
  if (current.waypoints.empty()) return {fresh, false};

  std::size_t match = current.waypoints.size();
  for (std::size_t i = 0; i < current.waypoints.size(); ++i) {
    const Pose& p = current.waypoints[i].pose;
    if (spatial_distance(p, merge_pose) <= pos_tol &&
        std::abs(wrap_angle(p.psi - merge_pose.psi)) <= heading_tol) {
      match = i;
      break;
    }
  }

  MergeOutcome out;
  if (match < current.waypoints.size()) {
    out.matched = true;
    out.plan.waypoints.assign(current.waypoints.begin(),
                              current.waypoints.begin() + static_cast<std::ptrdiff_t>(match + 1));
    out.plan.edges.assign(current.edges.begin(),
                          current.edges.begin() + static_cast<std::ptrdiff_t>(match));
    append_fresh(out.plan, fresh, true);
    return out;
  }

  // No match: splice the fresh plan at the plan point nearest the anchor.
  const std::size_t j = nearest_waypoint(current, merge_pose);
  out.matched = false;
  out.plan.waypoints.assign(current.waypoints.begin(),
                            current.waypoints.begin() + static_cast<std::ptrdiff_t>(j + 1));
  out.plan.edges.assign(current.edges.begin(),
                        current.edges.begin() + static_cast<std::ptrdiff_t>(j));
  const Pose& a = out.plan.waypoints.back().pose;
  const Pose& b = fresh.waypoints.front().pose;
  const double gap = horizontal_distance(a, b);
  if (gap > 1e-9) {
    EdgeGeometry connector;
    connector.segments.push_back(
        {a.xy(), std::atan2(b.y - a.y, b.x - a.x), 0.0, gap});
    connector.length = gap;
    connector.z_start = a.z;
    connector.z_end = b.z;
    out.plan.edges.push_back(connector);
    out.plan.waypoints.push_back(
        {b, out.plan.waypoints.back().cost + gap, out.plan.waypoints.back().info});
    append_fresh(out.plan, fresh, true);
  } else {
    append_fresh(out.plan, fresh, true);
  }
  return out;
}

namespace {

struct Anchor {
  std::size_t index = 0;
  Pose pose;
  double distance_from_vehicle = 0.0;  // along the plan
};

// First planner decision point at least `lookahead` metres ahead of the
// vehicle (and past `min_cost`, so consecutive anchors advance strictly
// along the plan and stay on live tree nodes); falls back to the final
// waypoint.
Anchor pick_anchor(const MissionState& st, double lookahead, double min_cost) {
  const Plan& plan = st.plan;
  const std::size_t wp_i = std::min(st.waypoint_index, plan.waypoints.size() - 1);
  const double s_now = plan.waypoints[wp_i].cost -
                       horizontal_distance(st.vehicle.pose, plan.waypoints[wp_i].pose);
  const double threshold = std::max(s_now + lookahead, min_cost);
  for (std::size_t i = wp_i; i < plan.waypoints.size(); ++i) {
    if (!plan.waypoints[i].node) continue;
    if (plan.waypoints[i].cost >= threshold) {
      return {i, plan.waypoints[i].pose,
              std::max(plan.waypoints[i].cost - s_now, 0.0)};
    }
  }
  const std::size_t last = plan.waypoints.size() - 1;
  return {last, plan.waypoints[last].pose,
          std::max(plan.waypoints[last].cost - s_now, 0.0)};
}

void push_trace(MissionState& st, MissionReport& report) {
  report.trace.push_back(
      {st.time, st.current_entropy, st.pct_reduction(), st.vehicle.pose});
}

}  // namespace

MissionReport run_mission(const Environment& env, PlannerBase& planner,
                          const SimConfig& config) {
  if (env.truth.size() != static_cast<std::size_t>(env.prior.size())) {
    throw std::invalid_argument("run_mission: truth/prior size mismatch");
  }
  MissionState st;
  st.truth = env.truth;
  st.belief = env.prior;
  st.vehicle = {env.start, config.speed, 0.0};
  st.budget = env.budget;
  st.initial_entropy = st.belief.total_entropy();
  st.current_entropy = st.initial_entropy;

  MissionReport report;
  report.initial_entropy = st.initial_entropy;
  std::mt19937_64 rng(config.seed);

  if (st.budget <= 0.0) {
    push_trace(st, report);
    report.final_belief = st.belief;
    report.final_entropy = st.current_entropy;
    return report;
  }

  try {
    st.plan = densify_plan(planner.plan({env.start, st.budget, st.belief, env.bounds}),
                           config.track_spacing);
    report.plan_costs.push_back(st.plan.total_cost());
  } catch (const std::exception&) {
    ++report.planner_failures;
  }
  if (st.plan.waypoints.empty()) st.complete = true;

  const double latency = config.planning_latency * config.time_multiplier;
  double next_replan = config.replan_period;
  double min_anchor_cost = 0.0;
  bool pending_active = false;
  Plan pending_plan;
  Pose pending_anchor;
  double pending_deliver_at = 0.0;

  push_trace(st, report);
  report.executed.push_back(st.vehicle.pose);

  while (st.vehicle.distance_flown < st.budget) {
    if (config.max_mission_time > 0.0 && st.time >= config.max_mission_time) break;

    // A finished plan with budget to spare triggers an immediate replan
    // from wherever the vehicle is; otherwise the mission is over.
    if (st.complete) {
      if (!config.replanning || st.remaining_budget() <= 1.0) break;
      Pose start = st.vehicle.pose;
      start.x = std::clamp(start.x, env.bounds.x_min, env.bounds.x_max);
      start.y = std::clamp(start.y, env.bounds.y_min, env.bounds.y_max);
      Plan fresh;
      try {
        fresh = densify_plan(planner.plan({start, st.remaining_budget(), st.belief, env.bounds}),
                             config.track_spacing);
        report.plan_costs.push_back(fresh.total_cost());
      } catch (const std::exception&) {
        ++report.planner_failures;
        break;
      }
      if (fresh.waypoints.size() < 2) break;  // nowhere left to go
      st.plan = std::move(fresh);
      st.waypoint_index = 0;
      st.complete = false;
      pending_active = false;
      min_anchor_cost = 0.0;  // new cost frame
      next_replan = st.time + config.replan_period;
      ++report.replan_count;
    }

    if (pending_active && st.time >= pending_deliver_at) {
      const MergeOutcome merged = merge_plan(st.plan, pending_plan, pending_anchor);
      if (!merged.matched) ++report.merge_fallbacks;
      // The prefix up to the anchor is unchanged, so the current target
      // index stays valid; clamp defensively.
      st.plan = merged.plan;
      st.waypoint_index = std::min(st.waypoint_index, st.plan.waypoints.size() - 1);
      pending_active = false;
      ++report.replan_count;
    }

    if (config.replanning && !pending_active && st.time >= next_replan) {
      const Anchor anchor = pick_anchor(st, latency * config.speed, min_anchor_cost);
      const double remaining =
          st.budget - st.vehicle.distance_flown - anchor.distance_from_vehicle;
      if (remaining > 1.0) {
        try {
          pending_plan = densify_plan(
              planner.plan({anchor.pose, remaining, st.belief, env.bounds}),
              config.track_spacing);
          report.plan_costs.push_back(pending_plan.total_cost());
          pending_anchor = anchor.pose;
          pending_deliver_at = st.time + latency;
          pending_active = true;
          min_anchor_cost = st.plan.waypoints[anchor.index].cost + 1e-6;
        } catch (const std::exception&) {
          ++report.planner_failures;
        }
      }
      next_replan = st.time + config.replan_period;
    }

    step(st, config, config.dt);
    st.time += config.dt;
    if (is_banking(st, config)) {
      ++report.banking_ticks;
    } else {
      ++report.observing_ticks;
    }
    observe(st, env.cam, env.sensor, config, rng);
    push_trace(st, report);
    report.executed.push_back(st.vehicle.pose);
  }

  report.final_entropy = st.belief.total_entropy();
  st.current_entropy = report.final_entropy;
  report.final_pct_reduction = st.pct_reduction();
  if (!report.trace.empty()) {
    report.trace.back().entropy_bits = report.final_entropy;
    report.trace.back().pct_reduction = report.final_pct_reduction;
  }
  report.path_length = st.vehicle.distance_flown;
  report.mission_time = st.time;
  report.budget_exceeded =
      st.vehicle.distance_flown > st.budget + config.speed * config.dt + 1e-6;
  report.cycles = planner.drain_cycle_stats();
  report.final_belief = st.belief;
  return report;
}

}  // namespace ipp
