#include "ipp/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include <array>

#include "ipp/dubins.hpp"
#include "ipp/env_gen.hpp"
#include "ipp/planner.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace ipp {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  auto split = [](std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t state = a;
  std::uint64_t out = split(state);
  state ^= b + 0x9E3779B97F4A7C15ULL;
  out ^= split(state);
  state ^= c + 0xC2B2AE3D27D4EB4FULL;
  out ^= split(state);
  state ^= d + 0x165667B19E3779F9ULL;
  out ^= split(state);
  return out;
}

CampaignConfig make_campaign_config(const std::string& scale) {
  CampaignConfig config;
  config.scale = scale;
  if (scale == "desk") {
    config.scenario = desk_scenario();
  } else if (scale == "field") {
    config.scenario = field_scenario();
  } else {
    throw std::invalid_argument("unknown scale: " + scale);
  }
  return config;
}

CampaignConfig load_campaign_config(std::istream& is) {
  json j = json::parse(is);
  CampaignConfig config = make_campaign_config(j.value("scale", std::string("desk")));
  config.seed = j.value("seed", config.seed);
  config.trials = j.value("trials", config.trials);
  config.deterministic = j.value("deterministic", config.deterministic);
  config.workers = j.value("workers", config.workers);
  config.out_dir = j.value("out_dir", config.out_dir);
  if (j.contains("planners")) config.planners = j["planners"].get<std::vector<std::string>>();
  if (j.contains("budgets")) config.budgets = j["budgets"].get<std::vector<double>>();

  if (j.contains("overrides")) {
    const json& o = j["overrides"];
    Scenario& sc = config.scenario;
    if (o.contains("bounds")) {
      const auto b = o["bounds"].get<std::vector<double>>();
      if (b.size() != 4) throw std::invalid_argument("overrides.bounds needs 4 numbers");
      sc.bounds = {b[0], b[1], b[2], b[3]};
    }
    sc.cell_size = o.value("cell_size", sc.cell_size);
    sc.budget = o.value("budget", sc.budget);
    sc.planner.extend_distance = o.value("extend_distance", sc.planner.extend_distance);
    sc.planner.near_radius = o.value("near_radius", sc.planner.near_radius);
    sc.planner.prune_radius = o.value("prune_radius", sc.planner.prune_radius);
    sc.planner.planning_time = o.value("planning_time", sc.planner.planning_time);
    sc.planner.iterations_per_cycle =
        o.value("iterations_per_cycle", sc.planner.iterations_per_cycle);
    sc.planner.horizon = o.value("horizon", sc.planner.horizon);
    sc.planner.recycle = o.value("recycle", sc.planner.recycle);
    sc.planner.use_embeddings = o.value("use_embeddings", sc.planner.use_embeddings);
    if (o.contains("decay_gamma") || o.contains("decay_beta")) {
      sc.planner.decay = DecayFunction::make(o.value("decay_gamma", 1.0),
                                             o.value("decay_beta", 0.0));
    }
    sc.mcts.iterations_per_cycle = o.value("mcts_iterations", sc.mcts.iterations_per_cycle);
    sc.mcts.primitive_length = o.value("mcts_primitive_length", sc.mcts.primitive_length);
    sc.mcts.exploration_weight = o.value("mcts_exploration", sc.mcts.exploration_weight);
    sc.sim.replan_period = o.value("replan_period", sc.sim.replan_period);
    sc.sim.planning_latency = o.value("planning_latency", sc.sim.planning_latency);
    sc.sim.replanning = o.value("replanning", sc.sim.replanning);
    sc.sim.time_multiplier = o.value("time_multiplier", sc.sim.time_multiplier);
  }
  return config;
}

std::string campaign_config_json(const CampaignConfig& config) {
  const Scenario& sc = config.scenario;
  json j;
  j["scale"] = config.scale;
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["planners"] = config.planners;
  j["budgets"] = config.budgets.empty() ? std::vector<double>{sc.budget} : config.budgets;
  j["deterministic"] = config.deterministic;
  j["workers"] = config.workers;
  j["scenario"] = {
      {"bounds", {sc.bounds.x_min, sc.bounds.y_min, sc.bounds.x_max, sc.bounds.y_max}},
      {"cell_size", sc.cell_size},
      {"budget", sc.budget},
      {"extend_distance", sc.planner.extend_distance},
      {"near_radius", sc.planner.near_radius},
      {"prune_radius", sc.planner.prune_radius},
      {"planning_time", sc.planner.planning_time},
      {"iterations_per_cycle", sc.planner.iterations_per_cycle},
      {"horizon", sc.planner.horizon},
      {"recycle", sc.planner.recycle},
      {"use_embeddings", sc.planner.use_embeddings},
      {"turn_radius", sc.planner.turn_radius},
      {"speed", sc.planner.speed},
      {"mcts_iterations", sc.mcts.iterations_per_cycle},
      {"mcts_primitive_length", sc.mcts.primitive_length},
      {"replan_period", sc.sim.replan_period},
      {"planning_latency", sc.sim.planning_latency},
      {"replanning", sc.sim.replanning},
      {"dt", sc.sim.dt},
  };
  return j.dump();
}

std::unique_ptr<PlannerBase> make_planner(const std::string& name, const Scenario& sc,
                                          std::uint64_t seed, bool deterministic) {
  auto tree_cfg = [&](bool recycle) {
    PlannerConfig cfg = sc.planner;
    cfg.seed = seed;
    cfg.recycle = recycle;
    if (deterministic && cfg.iterations_per_cycle <= 0) {
      cfg.iterations_per_cycle = std::max(1, static_cast<int>(cfg.planning_time * 200.0));
    }
    return cfg;
  };
  if (name == "informed_tree") {
    return std::make_unique<InformedTreePlanner>(sc.cam, sc.sensor, tree_cfg(true));
  }
  if (name == "informed_tree_fresh") {
    return std::make_unique<InformedTreePlanner>(sc.cam, sc.sensor, tree_cfg(false));
  }
  if (name == "greedy") {
    return std::make_unique<GreedyPlanner>(sc.cam, sc.sensor, sc.greedy);
  }
  if (name == "mcts") {
    MctsConfig cfg = sc.mcts;
    cfg.seed = seed;
    if (deterministic && cfg.iterations_per_cycle <= 0) {
      cfg.iterations_per_cycle = std::max(1, static_cast<int>(cfg.planning_time * 200.0));
    }
    return std::make_unique<MctsPlanner>(sc.cam, sc.sensor, cfg);
  }
  if (name == "random") {
    RandomConfig cfg = sc.random;
    cfg.seed = seed;
    return std::make_unique<RandomPlanner>(sc.cam, cfg);
  }
  if (name == "coverage") {
    return std::make_unique<CoveragePlanner>(sc.cam, sc.coverage);
  }
  throw std::invalid_argument("unknown planner: " + name);
}

Environment make_environment(const Scenario& sc, std::uint64_t env_seed, double budget) {
  std::mt19937_64 rng(env_seed);
  EnvSpec spec = generate_env_spec(sc.bounds, sc.cell_size, sc.env_dist, rng);
  spec.seed = env_seed;
  Environment env;
  env.prior = rasterize_env(spec);
  env.truth = sample_truth(env.prior, mix_seed(env_seed, 0x7274757468ULL));
  env.bounds = sc.bounds;
  env.cam = sc.cam;
  env.sensor = sc.sensor;
  env.start = sc.start;
  env.budget = budget;
  return env;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");
  const std::vector<double> budgets =
      config.budgets.empty() ? std::vector<double>{config.scenario.budget} : config.budgets;

  std::vector<RunRecord> runs;
  for (int trial = 0; trial < config.trials; ++trial) {
    for (std::size_t pi = 0; pi < config.planners.size(); ++pi) {
      for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        RunRecord r;
        r.trial = trial;
        r.planner = config.planners[pi];
        r.budget = budgets[bi];
        r.env_seed = mix_seed(config.seed, 0xE17, static_cast<std::uint64_t>(trial));
        r.run_seed = mix_seed(config.seed, static_cast<std::uint64_t>(trial), pi + 1, bi + 1);
        runs.push_back(std::move(r));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      RunRecord& r = runs[i];
      try {
        const Environment env = make_environment(config.scenario, r.env_seed, r.budget);
        auto planner =
            make_planner(r.planner, config.scenario, r.run_seed, config.deterministic);
        SimConfig sim = config.scenario.sim;
        sim.seed = mix_seed(r.run_seed, 0x0B5EULL);
        r.report = run_mission(env, *planner, sim);
        r.ok = true;
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    }
  };

  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  CampaignResult result;
  result.runs = std::move(runs);
  for (const std::string& planner : config.planners) {
    for (const double budget : budgets) {
      SummaryRow row;
      row.planner = planner;
      row.budget = budget;
      std::vector<double> pct;
      for (const RunRecord& r : result.runs) {
        if (r.planner != planner || r.budget != budget) continue;
        if (r.ok) {
          pct.push_back(r.report.final_pct_reduction);
        } else {
          ++row.failures;
        }
      }
      row.stats = mean_ci95(pct);
      result.summary.push_back(std::move(row));
    }
  }
  return result;
}

namespace {

std::string run_basename(const RunRecord& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "trial%04d_%s_b%s", r.trial, r.planner.c_str(),
                fmt(r.budget).c_str());
  return buf;
}

void write_trace_csv(const fs::path& path, const std::string& header,
                     const RunRecord& r) {
  std::ofstream os(path);
  os << header;
  os << "# trial " << r.trial << " planner " << r.planner << " budget " << fmt(r.budget)
     << " env_seed " << r.env_seed << " run_seed " << r.run_seed << "\n";
  os << "t,entropy_bits,pct_reduction,x,y,z,psi\n";
  for (const EntropySample& s : r.report.trace) {
    os << fmt(s.t) << ',' << fmt(s.entropy_bits) << ',' << fmt(s.pct_reduction) << ','
       << fmt(s.pose.x) << ',' << fmt(s.pose.y) << ',' << fmt(s.pose.z) << ','
       << fmt(s.pose.psi) << "\n";
  }
}

void write_mission_summary(const fs::path& path, const RunRecord& r, bool deterministic) {
  json j;
  j["trial"] = r.trial;
  j["planner"] = r.planner;
  j["budget"] = r.budget;
  j["env_seed"] = r.env_seed;
  j["run_seed"] = r.run_seed;
  j["ok"] = r.ok;
  if (!r.ok) j["error"] = r.error;
  j["final_pct_reduction"] = r.report.final_pct_reduction;
  j["initial_entropy_bits"] = r.report.initial_entropy;
  j["final_entropy_bits"] = r.report.final_entropy;
  j["path_length_m"] = r.report.path_length;
  j["mission_time_s"] = r.report.mission_time;
  j["replan_count"] = r.report.replan_count;
  j["planner_failures"] = r.report.planner_failures;
  j["merge_fallbacks"] = r.report.merge_fallbacks;
  j["budget_exceeded"] = r.report.budget_exceeded;
  j["plan_costs"] = r.report.plan_costs;
  json cycles = json::array();
  for (const CycleStats& c : r.report.cycles) {
    json jc;
    jc["iterations"] = c.iterations;
    jc["tree_size"] = c.tree_size;
    jc["recycled"] = c.recycled;
    jc["nodes_added"] = c.nodes_added;
    if (!deterministic) {
      jc["recycle_ms"] = c.recycle_seconds * 1e3;
      jc["total_ms"] = c.total_seconds * 1e3;
      jc["score_calls"] = c.score_calls;
      jc["score_ms"] = c.score_seconds * 1e3;
    }
    cycles.push_back(std::move(jc));
  }
  j["cycles"] = std::move(cycles);
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

}  // namespace

std::string summary_csv_text(const std::string& config_json,
                             const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "# ippbench campaign\n# config " << config_json << "\n";
  os << "planner,budget,n,mean_pct,ci95,failures\n";
  for (const SummaryRow& row : rows) {
    os << row.planner << ',' << fmt(row.budget) << ',' << row.stats.n << ','
       << fmt(row.stats.mean) << ',' << fmt(row.stats.ci95) << ',' << row.failures << "\n";
  }
  return os.str();
}

void write_campaign_outputs(const CampaignConfig& config, const CampaignResult& result) {
  const fs::path out(config.out_dir);
  fs::create_directories(out / "runs");
  const std::string config_json = campaign_config_json(config);
  const std::string header = "# ippbench campaign\n# config " + config_json + "\n";

  {
    std::ofstream os(out / "runs.csv");
    os << header;
    os << "trial,planner,budget,env_seed,run_seed,ok,final_pct,path_length,mission_time,"
          "replans,planner_failures,merge_fallbacks,budget_exceeded,error\n";
    for (const RunRecord& r : result.runs) {
      os << r.trial << ',' << r.planner << ',' << fmt(r.budget) << ',' << r.env_seed << ','
         << r.run_seed << ',' << (r.ok ? 1 : 0) << ',' << fmt(r.report.final_pct_reduction)
         << ',' << fmt(r.report.path_length) << ',' << fmt(r.report.mission_time) << ','
         << r.report.replan_count << ',' << r.report.planner_failures << ','
         << r.report.merge_fallbacks << ',' << (r.report.budget_exceeded ? 1 : 0) << ','
         << sanitize(r.error) << "\n";
    }
  }

  for (const RunRecord& r : result.runs) {
    if (!r.ok) continue;
    const std::string base = run_basename(r);
    write_trace_csv(out / "runs" / (base + ".csv"), header, r);
    write_mission_summary(out / "runs" / (base + ".summary.json"), r, config.deterministic);
  }

  // Mean trace with confidence band per planner/budget, on the sim grid.
  const std::vector<double> budgets =
      config.budgets.empty() ? std::vector<double>{config.scenario.budget} : config.budgets;
  for (const std::string& planner : config.planners) {
    for (const double budget : budgets) {
      std::vector<const RunRecord*> group;
      std::size_t max_len = 0;
      for (const RunRecord& r : result.runs) {
        if (r.planner == planner && r.budget == budget && r.ok) {
          group.push_back(&r);
          max_len = std::max(max_len, r.report.trace.size());
        }
      }
      if (group.empty()) continue;
      std::ofstream os(out / ("curve_" + planner + "_b" + fmt(budget) + ".csv"));
      os << header << "t,n,mean_pct,ci95\n";
      for (std::size_t i = 0; i < max_len; ++i) {
        std::vector<double> pct;
        double t = 0.0;
        for (const RunRecord* r : group) {
          // Finished missions hold their final value.
          const auto& trace = r->report.trace;
          if (trace.empty()) continue;
          const EntropySample& s = i < trace.size() ? trace[i] : trace.back();
          if (i < trace.size()) t = s.t;
          pct.push_back(s.pct_reduction);
        }
        const MeanCi m = mean_ci95(pct);
        os << fmt(t) << ',' << m.n << ',' << fmt(m.mean) << ',' << fmt(m.ci95) << "\n";
      }
    }
  }

  std::ofstream os(out / "summary.csv");
  os << summary_csv_text(config_json, result.summary);

  json j;
  j["config"] = json::parse(config_json);
  json rows = json::array();
  for (const SummaryRow& row : result.summary) {
    rows.push_back({{"planner", row.planner},
                    {"budget", row.budget},
                    {"n", row.stats.n},
                    {"mean_pct", row.stats.mean},
                    {"ci95", row.stats.ci95},
                    {"failures", row.failures}});
  }
  j["summary"] = std::move(rows);
  std::ofstream js(out / "summary.json");
  js << j.dump(2) << "\n";
}

std::vector<SummaryRow> aggregate_runs_csv(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "runs.csv");
  if (!is) throw std::runtime_error("aggregate_runs_csv: cannot open runs.csv in " + dir);
  std::string line;
  struct Key {
    std::string planner;
    double budget;
  };
  std::vector<Key> order;
  std::map<std::pair<std::string, double>, std::pair<std::vector<double>, int>> groups;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 7) continue;
    const std::string planner = fields[1];
    const double budget = std::stod(fields[2]);
    const bool ok = fields[5] == "1";
    const double pct = std::stod(fields[6]);
    const auto key = std::make_pair(planner, budget);
    if (groups.find(key) == groups.end()) order.push_back({planner, budget});
    auto& g = groups[key];
    if (ok) {
      g.first.push_back(pct);
    } else {
      ++g.second;
    }
  }
  std::vector<SummaryRow> rows;
  for (const Key& k : order) {
    const auto& g = groups[{k.planner, k.budget}];
    SummaryRow row;
    row.planner = k.planner;
    row.budget = k.budget;
    row.stats = mean_ci95(g.first);
    row.failures = g.second;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepPoint> run_sweep(const CampaignConfig& config,
                                  const std::vector<double>& extend_grid,
                                  const std::vector<double>& near_grid,
                                  const std::vector<double>& prune_grid, int envs) {
  if (extend_grid.empty() || near_grid.empty() || prune_grid.empty() || envs < 1) {
    throw std::invalid_argument("run_sweep: empty grid");
  }
  std::vector<SweepPoint> points;
  for (const double extend : extend_grid) {
    for (const double near : near_grid) {
      for (const double prune : prune_grid) {
        points.push_back({extend, near, prune, {}});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::vector<double>> pct(points.size());
  auto work = [&]() {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= points.size() * static_cast<std::size_t>(envs)) return;
      const std::size_t pi = task / static_cast<std::size_t>(envs);
      const int e = static_cast<int>(task % static_cast<std::size_t>(envs));
      Scenario sc = config.scenario;
      sc.planner.extend_distance = points[pi].extend;
      sc.planner.near_radius = std::max(points[pi].near, 1.0);
      sc.planner.prune_radius = std::max(points[pi].prune, 1.0);
      const std::uint64_t env_seed = mix_seed(config.seed, 0x53EFULL, e);
      const Environment env = make_environment(sc, env_seed, sc.budget);
      auto planner = make_planner("informed_tree", sc, mix_seed(config.seed, pi, e),
                                  config.deterministic);
      SimConfig sim = sc.sim;
      sim.seed = mix_seed(env_seed, pi);
      const MissionReport report = run_mission(env, *planner, sim);
      static std::mutex m;
      std::lock_guard<std::mutex> lock(m);
      pct[pi].push_back(report.final_pct_reduction);
    }
  };
  const int workers = std::max(1, config.workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < points.size(); ++i) points[i].stats = mean_ci95(pct[i]);
  return points;
}

void write_sweep_csv(const CampaignConfig& config, const std::vector<SweepPoint>& points) {
  fs::create_directories(config.out_dir);
  std::ofstream os(fs::path(config.out_dir) / "sweep.csv");
  os << "# ippbench sweep\n# config " << campaign_config_json(config) << "\n";
  os << "extend_distance,near_radius,prune_radius,n,mean_pct,ci95\n";
  for (const SweepPoint& p : points) {
    os << fmt(p.extend) << ',' << fmt(p.near) << ',' << fmt(p.prune) << ',' << p.stats.n << ','
       << fmt(p.stats.mean) << ',' << fmt(p.stats.ci95) << "\n";
  }
}

namespace {

MissionReport run_one(const Scenario& sc, const std::string& planner_name,
                      const Environment& env, std::uint64_t run_seed, bool deterministic,
                      bool replanning) {
  auto planner = make_planner(planner_name, sc, run_seed, deterministic);
  SimConfig sim = sc.sim;
  sim.seed = mix_seed(run_seed, 0x0B5EULL);
  sim.replanning = replanning;
  return run_mission(env, *planner, sim);
}

std::string ablate_recycle(const CampaignConfig& config) {
  const Scenario& sc = config.scenario;
  struct Arm {
    const char* name;
    const char* planner;
    bool replanning;
  };
  const Arm arms[] = {{"no_replan", "informed_tree", false},
                      {"replan_fresh", "informed_tree_fresh", true},
                      {"replan_recycle", "informed_tree", true}};
  std::vector<std::vector<double>> pct(3);

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t env_seed = mix_seed(config.seed, 0xAB1E, trial);
    const Environment env = make_environment(sc, env_seed, sc.budget);
    for (int a = 0; a < 3; ++a) {
      const std::uint64_t run_seed = mix_seed(config.seed, trial, a);
      const MissionReport r =
          run_one(sc, arms[a].planner, env, run_seed, config.deterministic, arms[a].replanning);
      pct[a].push_back(r.final_pct_reduction);
    }
  }

  fs::create_directories(config.out_dir);
  std::ofstream os(fs::path(config.out_dir) / "ablate_recycle.csv");
  os << "# ippbench ablation recycle\n# config " << campaign_config_json(config) << "\n";
  os << "arm,n,mean_pct,ci95\n";
  std::ostringstream digest;
  for (int a = 0; a < 3; ++a) {
    const MeanCi m = mean_ci95(pct[a]);
    os << arms[a].name << ',' << m.n << ',' << fmt(m.mean) << ',' << fmt(m.ci95) << "\n";
    digest << arms[a].name << ": " << fmt(m.mean) << " +- " << fmt(m.ci95) << " (n=" << m.n
           << ")\n";
  }
  const PairedTResult t_recycle = paired_t_greater(pct[2], pct[0]);
  const PairedTResult t_fresh = paired_t_greater(pct[2], pct[1]);
  os << "# paired_t recycle_vs_no_replan t " << fmt(t_recycle.t) << " p "
     << fmt(t_recycle.p_one_sided) << "\n";
  os << "# paired_t recycle_vs_fresh t " << fmt(t_fresh.t) << " p " << fmt(t_fresh.p_one_sided)
     << "\n";
  digest << "recycle > no_replan: t=" << fmt(t_recycle.t) << " p=" << fmt(t_recycle.p_one_sided)
         << "\n";
  return digest.str();
}

std::string ablate_embedding(const CampaignConfig& config) {
  const Scenario& sc = config.scenario;
  const std::uint64_t env_seed = mix_seed(config.seed, 0xE3BED);
  const Environment env = make_environment(sc, env_seed, sc.budget);

  fs::create_directories(config.out_dir);
  std::ofstream curve(fs::path(config.out_dir) / "ablate_embedding_curve.csv");
  curve << "# ippbench ablation embedding\n# config " << campaign_config_json(config) << "\n";
  curve << "arm,iterations,build_seconds,tree_size,score_calls,score_seconds\n";

  std::ostringstream digest;
  double per_node_with = 0.0, per_node_without = 0.0;
  for (const bool embed : {true, false}) {
    for (const int iters : {50, 100, 200, 400, 800}) {
      Scenario arm = sc;
      arm.planner.use_embeddings = embed;
      arm.planner.iterations_per_cycle = iters;
      auto planner = make_planner("informed_tree", arm, mix_seed(config.seed, iters, embed),
                                  true);
      auto* tp = static_cast<InformedTreePlanner*>(planner.get());
      tp->plan({env.start, env.budget, env.prior, env.bounds});
      const CycleStats cs = tp->drain_cycle_stats().back();
      curve << (embed ? "embedding" : "no_embedding") << ',' << iters << ','
            << fmt(cs.total_seconds) << ',' << cs.tree_size << ',' << cs.score_calls << ','
            << fmt(cs.score_seconds) << "\n";
      if (iters == 800 && cs.score_calls > 0) {
        const double per_node = cs.score_seconds / static_cast<double>(cs.score_calls);
        (embed ? per_node_with : per_node_without) = per_node;
      }
    }
  }
  digest << "per-node info-gain time: embedding " << fmt(per_node_with * 1e6)
         << " us, no embedding " << fmt(per_node_without * 1e6) << " us, ratio "
         << fmt(per_node_without > 0 ? per_node_with / per_node_without : 0.0) << "\n";

  // Rebuild timing: recursive subtree update vs per-node replay.
  Scenario arm = sc;
  arm.planner.iterations_per_cycle = 1500;
  auto planner = make_planner("informed_tree", arm, mix_seed(config.seed, 0x51), true);
  auto* tp = static_cast<InformedTreePlanner*>(planner.get());
  tp->plan({env.start, env.budget, env.prior, env.bounds});

  BeliefMap changed = env.prior;
  std::mt19937_64 rng(mix_seed(config.seed, 0xC4A2));
  std::uniform_int_distribution<CellIndex> cell_dist(0, changed.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < changed.size() / 4; ++k) {
    const CellIndex c = cell_dist(rng);
    changed.update_prob(
        c, clamp_stored_prob(bayes_posterior(changed.prob(c), u(rng) < 0.5, 0.9, 0.9)));
  }
  const RewardContext ctx{&changed, &sc.sensor, sc.planner.decay, sc.planner.speed};

  PlanTree copy = tp->tree();
  const std::size_t n_nodes = copy.size();
  auto t0 = std::chrono::steady_clock::now();
  copy.update_subtree(changed, env.budget, ctx);
  const double recursive_s = elapsed_s(t0);

  const PlanTree& tree = tp->tree();
  t0 = std::chrono::steady_clock::now();
  double checksum = 0.0;
  for (const NodeId id : tree.alive_nodes()) checksum += replay_node_info(tree, id, ctx).info;
  const double naive_s = elapsed_s(t0);
  (void)checksum;

  std::ofstream rebuild(fs::path(config.out_dir) / "ablate_embedding_rebuild.csv");
  rebuild << "# ippbench ablation embedding rebuild\n";
  rebuild << "method,nodes,total_seconds,per_node_us\n";
  rebuild << "recursive_update," << n_nodes << ',' << fmt(recursive_s) << ','
          << fmt(1e6 * recursive_s / static_cast<double>(n_nodes)) << "\n";
  rebuild << "per_node_replay," << n_nodes << ',' << fmt(naive_s) << ','
          << fmt(1e6 * naive_s / static_cast<double>(n_nodes)) << "\n";
  digest << "rebuild per node: recursive " << fmt(1e6 * recursive_s / n_nodes)
         << " us vs replay " << fmt(1e6 * naive_s / n_nodes) << " us\n";
  return digest.str();
}

std::string ablate_horizon(const CampaignConfig& config) {
  const Scenario& sc = config.scenario;
  const double w = sc.bounds.width(), h = sc.bounds.height();
  const double sigma_small = 0.035 * w, sigma_large = 0.12 * w;

  EnvSpec clustered;
  clustered.bounds = sc.bounds;
  clustered.cell_size = sc.cell_size;
  clustered.clusters = {{{0.25 * w, 0.3 * h}, sigma_small, 0.5},
                        {{0.75 * w, 0.25 * h}, sigma_small, 0.5},
                        {{0.3 * w, 0.8 * h}, sigma_small, 0.5},
                        {{0.8 * w, 0.75 * h}, sigma_small, 0.5}};
  EnvSpec dense;
  dense.bounds = sc.bounds;
  dense.cell_size = sc.cell_size;
  std::mt19937_64 rng(mix_seed(config.seed, 0xD05EULL));
  std::uniform_real_distribution<double> ux(sc.bounds.x_min, sc.bounds.x_max);
  std::uniform_real_distribution<double> uy(sc.bounds.y_min, sc.bounds.y_max);
  for (int i = 0; i < 16; ++i) dense.clusters.push_back({{ux(rng), uy(rng)}, sigma_large, 0.35});

  fs::create_directories(config.out_dir);
  std::ofstream os(fs::path(config.out_dir) / "ablate_horizon.csv");
  os << "# ippbench ablation horizon\n# config " << campaign_config_json(config) << "\n";
  os << "map,arm,final_pct,clusters_visited,clusters_total\n";

  std::ostringstream digest;
  const std::array<std::pair<const char*, const EnvSpec*>, 2> maps = {
      {{"clustered", &clustered}, {"dense", &dense}}};
  const std::array<std::pair<const char*, double>, 2> horizon_arms = {
      {{"full", 0.0}, {"short", sc.budget / 3.0}}};
  for (const auto& [map_name, spec_ptr] : maps) {
    const EnvSpec& spec = *spec_ptr;
    Environment env;
    env.prior = rasterize_env(spec);
    env.truth = sample_truth(env.prior, mix_seed(config.seed, 0x7A, spec.clusters.size()));
    env.bounds = sc.bounds;
    env.cam = sc.cam;
    env.sensor = sc.sensor;
    env.start = sc.start;
    env.budget = sc.budget;

    for (const auto& [arm_name, horizon] : horizon_arms) {
      Scenario arm = sc;
      arm.planner.horizon = horizon;
      const MissionReport r = run_one(arm, "informed_tree", env,
                                      mix_seed(config.seed, horizon > 0, spec.clusters.size()),
                                      config.deterministic, true);
      int visited = 0;
      for (const GaussianPrior& g : spec.clusters) {
        bool touched = false;
        for (CellIndex c = 0; c < env.prior.size() && !touched; ++c) {
          if (norm(env.prior.cell_center(c) - g.center) > 2.0 * g.sigma) continue;
          if (std::abs(r.final_belief.prob(c) - env.prior.prob(c)) > 1e-3) touched = true;
        }
        if (touched) ++visited;
      }
      os << map_name << ',' << arm_name << ',' << fmt(r.final_pct_reduction) << ',' << visited
         << ',' << spec.clusters.size() << "\n";
      digest << map_name << '/' << arm_name << ": " << fmt(r.final_pct_reduction) << "% "
             << visited << '/' << spec.clusters.size() << " clusters\n";
    }
  }
  return digest.str();
}

std::string ablate_priority_time(const CampaignConfig& config) {
  const Scenario& sc = config.scenario;
  const double w = sc.bounds.width(), h = sc.bounds.height();
  const double sigma = 0.06 * w;
  const std::vector<GaussianPrior> clusters = {{{0.35 * w, 0.35 * h}, sigma, 0.5},
                                               {{0.65 * w, 0.6 * h}, sigma, 0.5},
                                               {{0.15 * w, 0.85 * h}, sigma, 0.5}};
  EnvSpec spec;
  spec.bounds = sc.bounds;
  spec.cell_size = sc.cell_size;
  spec.clusters = clusters;

  const double mission_time = sc.budget / sc.planner.speed;
  const DecayFunction decay = DecayFunction::make(0.3, -(1.0 - 0.3) / (0.5 * mission_time));

  fs::create_directories(config.out_dir);
  std::ofstream os(fs::path(config.out_dir) / "ablate_priority_time.csv");
  os << "# ippbench ablation priority_time\n# config " << campaign_config_json(config) << "\n";
  os << "arm,cluster,priority,first_visit_s,final_pct\n";

  std::ostringstream digest;
  struct PriorityArm {
    const char* name;
    double boost;
    bool use_decay;
  };
  const std::array<PriorityArm, 3> priority_arms = {
      {{"equal", 1.0, false}, {"priority", 5.0, false}, {"priority_time", 5.0, true}}};
  for (const auto& [arm_name, boost, use_decay] : priority_arms) {
    Environment env;
    env.prior = rasterize_env(spec);
    // Weight the far cluster's cells.
    if (boost != 1.0) {
      for (CellIndex c = 0; c < env.prior.size(); ++c) {
        if (norm(env.prior.cell_center(c) - clusters[2].center) <= 2.5 * sigma) {
          env.prior.set_priority(c, boost);
        }
      }
    }
    env.truth = sample_truth(env.prior, mix_seed(config.seed, 0x97, boost > 1.0));
    env.bounds = sc.bounds;
    env.cam = sc.cam;
    env.sensor = sc.sensor;
    env.start = sc.start;
    env.budget = sc.budget;

    Scenario arm = sc;
    arm.planner.decay = use_decay ? decay : DecayFunction::none();
    const MissionReport r = run_one(arm, "informed_tree", env,
                                    mix_seed(config.seed, boost > 1.0, use_decay),
                                    config.deterministic, true);
    digest << arm_name << ": " << fmt(r.final_pct_reduction) << "% | first visits:";
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      double first_visit = -1.0;
      const double reach = 2.0 * sigma + 120.0;
      for (std::size_t i = 0; i < r.executed.size(); ++i) {
        if (norm(r.executed[i].xy() - clusters[ci].center) <= reach) {
          first_visit = r.trace[std::min(i, r.trace.size() - 1)].t;
          break;
        }
      }
      os << arm_name << ',' << ci << ',' << (ci == 2 ? fmt(boost) : fmt(1.0)) << ','
         << fmt(first_visit) << ',' << fmt(r.final_pct_reduction) << "\n";
      digest << ' ' << fmt(first_visit);
    }
    digest << "\n";
  }
  return digest.str();
}

}  // namespace

std::string run_ablation(const std::string& name, const CampaignConfig& config) {
  if (name == "recycle") return ablate_recycle(config);
  if (name == "embedding") return ablate_embedding(config);
  if (name == "horizon") return ablate_horizon(config);
  if (name == "priority_time") return ablate_priority_time(config);
  throw std::invalid_argument(
      "unknown ablation '" + name + "' (expected recycle|embedding|horizon|priority_time)");
}

}  // namespace ipp
