#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ipp/campaign.hpp"
#include "ipp/env_gen.hpp"

using namespace ipp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

CampaignConfig tiny_config(const std::string& out_dir) {
  CampaignConfig config = make_campaign_config("desk");
  config.trials = 1;
  config.planners = {"random"};
  config.budgets = {800.0};
  config.seed = 7;
  config.deterministic = true;
  config.out_dir = out_dir;
  return config;
}

}  // namespace

TEST_CASE("generated env specs follow the cluster distribution") {
  const Bounds bounds{0, 0, 1000, 1000};

  SUBCASE("forced zero clusters give a flat-zero prior") {
    EnvDistribution dist;
    dist.min_clusters = dist.max_clusters = 0;
    std::mt19937_64 rng(1);
    const EnvSpec spec = generate_env_spec(bounds, 15.0, dist, rng);
    CHECK(spec.clusters.empty());
    const BeliefMap map = rasterize_env(spec);
    for (CellIndex i = 0; i < map.size(); ++i) CHECK(map.prob(i) == 0.0);
  }

  SUBCASE("one cluster peaks at its center and decays radially") {
    EnvSpec spec;
    spec.bounds = bounds;
    spec.cell_size = 10.0;
    spec.clusters = {{{505.0, 505.0}, 80.0, 0.5}};  // on a cell center
    const BeliefMap map = rasterize_env(spec);
    const CellIndex center = map.cell_at({505.0, 505.0});
    CHECK(map.prob(center) == doctest::Approx(0.5).epsilon(1e-3));
    double prev = map.prob(center);
    for (double x = 515.0; x < 900.0; x += 10.0) {
      const double p = map.prob(map.cell_at({x, 505.0}));
      CHECK(p <= prev + 1e-12);
      prev = p;
    }
  }

  SUBCASE("overlapping clusters clamp at one half") {
    EnvSpec spec;
    spec.bounds = bounds;
    spec.cell_size = 10.0;
    spec.clusters = {{{500.0, 500.0}, 100.0, 0.5}, {{510.0, 500.0}, 100.0, 0.5}};
    const BeliefMap map = rasterize_env(spec);
    for (CellIndex i = 0; i < map.size(); ++i) CHECK(map.prob(i) <= 0.5);
    CHECK(map.prob(map.cell_at({505.0, 505.0})) == 0.5);
  }

  SUBCASE("cluster counts are uniform over [4, 20]") {
    EnvDistribution dist;  // defaults: [4, 20]
    std::mt19937_64 rng(99);
    std::vector<int> counts(21, 0);
    const int draws = 1700;
    for (int i = 0; i < draws; ++i) {
      const EnvSpec spec = generate_env_spec(bounds, 30.0, dist, rng);
      REQUIRE(spec.clusters.size() >= 4);
      REQUIRE(spec.clusters.size() <= 20);
      ++counts[spec.clusters.size()];
    }
    const double expected = draws / 17.0;
    double chi2 = 0.0;
    for (int k = 4; k <= 20; ++k) chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
    CHECK(chi2 < 32.0);  // df = 16, 1% critical value
  }
}

TEST_CASE("env spec io round trip") {
  EnvSpec spec;
  spec.bounds = {0, 0, 1000, 1000};
  spec.cell_size = 15.0;
  spec.seed = 123;
  spec.clusters = {{{100.5, 200.25}, 60.0, 0.31}, {{800.0, 900.0}, 45.0, 0.5}};
  std::stringstream ss;
  spec.save(ss);
  const EnvSpec loaded = EnvSpec::load(ss);
  CHECK(loaded.seed == 123);
  REQUIRE(loaded.clusters.size() == 2);
  CHECK(loaded.clusters[1].peak == doctest::Approx(0.5));
  CHECK(loaded.cell_size == 15.0);
}

TEST_CASE("mix_seed is stable and spreads") {
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("paired environments share the env seed across planners") {
  CampaignConfig config = make_campaign_config("desk");
  config.trials = 2;
  config.planners = {"random", "coverage"};
  config.budgets = {500.0};
  config.deterministic = true;
  const CampaignResult result = run_campaign(config);
  REQUIRE(result.runs.size() == 4);
  CHECK(result.runs[0].env_seed == result.runs[1].env_seed);  // trial 0
  CHECK(result.runs[2].env_seed == result.runs[3].env_seed);  // trial 1
  CHECK(result.runs[0].env_seed != result.runs[2].env_seed);
  for (const RunRecord& r : result.runs) CHECK(r.ok);
}

TEST_CASE("campaign outputs are written and re-aggregate exactly") {
  const std::string out = (fs::temp_directory_path() / "ipp_test_campaign").string();
  fs::remove_all(out);
  const CampaignConfig config = tiny_config(out);
  const CampaignResult result = run_campaign(config);
  REQUIRE(result.runs.size() == 1);
  REQUIRE(result.summary.size() == 1);
  CHECK(result.summary[0].stats.n == 1);
  write_campaign_outputs(config, result);

  CHECK(fs::exists(fs::path(out) / "runs.csv"));
  CHECK(fs::exists(fs::path(out) / "summary.csv"));
  CHECK(fs::exists(fs::path(out) / "summary.json"));
  CHECK(fs::exists(fs::path(out) / "runs" / "trial0000_random_b800.csv"));
  CHECK(fs::exists(fs::path(out) / "curve_random_b800.csv"));

  // Trace CSV carries the documented column header and the config echo.
  const std::string trace = slurp(fs::path(out) / "runs" / "trial0000_random_b800.csv");
  CHECK(trace.find("t,entropy_bits,pct_reduction,x,y,z,psi") != std::string::npos);
  CHECK(trace.find("# config ") != std::string::npos);

  // Recomputing the summary from raw run records matches byte for byte.
  const auto rows = aggregate_runs_csv(out);
  const std::string recomputed = summary_csv_text(campaign_config_json(config), rows);
  CHECK(recomputed == slurp(fs::path(out) / "summary.csv"));
  fs::remove_all(out);
}

TEST_CASE("deterministic campaigns are byte-identical") {
  const std::string out_a = (fs::temp_directory_path() / "ipp_det_a").string();
  const std::string out_b = (fs::temp_directory_path() / "ipp_det_b").string();
  fs::remove_all(out_a);
  fs::remove_all(out_b);

  CampaignConfig config = make_campaign_config("desk");
  config.trials = 2;
  config.planners = {"informed_tree", "random"};
  config.budgets = {1000.0};
  config.seed = 7;
  config.deterministic = true;
  config.scenario.planner.iterations_per_cycle = 40;

  config.out_dir = out_a;
  write_campaign_outputs(config, run_campaign(config));
  config.out_dir = out_b;
  write_campaign_outputs(config, run_campaign(config));

  for (const char* name : {"runs.csv", "summary.csv", "summary.json"}) {
    INFO(name);
    std::string a = slurp(fs::path(out_a) / name);
    std::string b = slurp(fs::path(out_b) / name);
    CHECK(a == b);
  }
  // Per-run traces as well.
  const std::string trace_rel = "runs/trial0001_informed_tree_b1000.csv";
  CHECK(slurp(fs::path(out_a) / trace_rel) == slurp(fs::path(out_b) / trace_rel));
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}

TEST_CASE("campaign config json round trip") {
  const std::string text = R"({
    "scale": "desk",
    "seed": 42,
    "trials": 3,
    "planners": ["greedy"],
    "budgets": [1234.0],
    "deterministic": true,
    "workers": 2,
    "overrides": {
      "iterations_per_cycle": 55,
      "replan_period": 2.5,
      "horizon": 900.0,
      "decay_gamma": 0.5,
      "decay_beta": -0.01
    }
  })";
  std::istringstream is(text);
  const CampaignConfig config = load_campaign_config(is);
  CHECK(config.seed == 42);
  CHECK(config.trials == 3);
  CHECK(config.workers == 2);
  REQUIRE(config.planners.size() == 1);
  CHECK(config.planners[0] == "greedy");
  CHECK(config.budgets[0] == 1234.0);
  CHECK(config.scenario.planner.iterations_per_cycle == 55);
  CHECK(config.scenario.sim.replan_period == 2.5);
  CHECK(config.scenario.planner.horizon == 900.0);
  CHECK(config.scenario.planner.decay.gamma == 0.5);

  const std::string echo = campaign_config_json(config);
  CHECK(echo.find("\"seed\":42") != std::string::npos);
  CHECK(echo.find("\"horizon\":900.0") != std::string::npos);
}

TEST_CASE("unknown planner and ablation names are rejected") {
  const CampaignConfig config = make_campaign_config("desk");
  CHECK_THROWS_AS(make_planner("warp_drive", config.scenario, 1, true),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_ablation("nonsense", config), std::invalid_argument);
}

TEST_CASE("sweep emits one point per grid cell") {
  CampaignConfig config = make_campaign_config("desk");
  config.seed = 3;
  config.deterministic = true;
  config.scenario.planner.iterations_per_cycle = 25;
  config.scenario.budget = 800.0;
  const auto points = run_sweep(config, {200.0, 300.0}, {300.0}, {80.0, 120.0}, 2);
  CHECK(points.size() == 4);
  for (const SweepPoint& p : points) {
    CHECK(p.stats.n == 2);
    CHECK(p.stats.mean >= 0.0);
  }
}

TEST_CASE("workers do not change campaign results") {
  CampaignConfig config = make_campaign_config("desk");
  config.trials = 2;
  config.planners = {"random"};
  config.budgets = {600.0};
  config.deterministic = true;
  config.workers = 1;
  const CampaignResult serial = run_campaign(config);
  config.workers = 4;
  const CampaignResult parallel = run_campaign(config);
  REQUIRE(serial.runs.size() == parallel.runs.size());
  for (std::size_t i = 0; i < serial.runs.size(); ++i) {
    CHECK(serial.runs[i].report.final_pct_reduction ==
          parallel.runs[i].report.final_pct_reduction);
  }
}
