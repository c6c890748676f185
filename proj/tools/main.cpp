// ippbench: environment generation, Monte Carlo campaigns, parameter
// sweeps and ablation suites for the informative path planning toolkit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipp/campaign.hpp"
#include "ipp/env_gen.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string scale = "desk";
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::vector<std::string> planners;
  std::vector<double> budgets;
  int trials = 0;
  bool deterministic = false;
  int workers = 0;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--scale", o.scale, "Scenario scale: desk | field");
  cmd->add_option("--seed", o.seed, "Master seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--planners", o.planners, "Planner list")->delimiter(',');
  cmd->add_option("--budget", o.budgets, "Budget(s), m")->delimiter(',');
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_flag("--deterministic", o.deterministic,
                "Iteration-budgeted planning, byte-reproducible outputs");
  cmd->add_option("--workers", o.workers, "Parallel mission workers");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

ipp::CampaignConfig resolve(const CommonOpts& o) {
  ipp::CampaignConfig config;
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
    config = ipp::load_campaign_config(is);
  } else {
    config = ipp::make_campaign_config(o.scale);
  }
  if (o.seed_set) config.seed = o.seed;
  if (!o.planners.empty()) config.planners = o.planners;
  if (!o.budgets.empty()) config.budgets = o.budgets;
  if (o.trials > 0) config.trials = o.trials;
  if (o.deterministic) config.deterministic = true;
  if (o.workers > 0) config.workers = o.workers;
  if (!o.out_dir.empty()) config.out_dir = o.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ippbench: budget-constrained informative path planning benchmarks"};
  app.require_subcommand(1);

  CommonOpts gen_o, run_o, sweep_o, ablate_o;

  CLI::App* gen = app.add_subcommand("gen-env", "Generate a random environment");
  add_common(gen, gen_o);

  CLI::App* run = app.add_subcommand("run", "Run a Monte Carlo campaign");
  add_common(run, run_o);

  CLI::App* sweep = app.add_subcommand("sweep", "Planner parameter sweep");
  add_common(sweep, sweep_o);
  std::vector<double> extend_grid, near_grid, prune_grid;
  int sweep_envs = 5;
  sweep->add_option("--extend-grid", extend_grid, "Extend distances")->delimiter(',');
  sweep->add_option("--near-grid", near_grid, "Near radii")->delimiter(',');
  sweep->add_option("--prune-grid", prune_grid, "Prune radii")->delimiter(',');
  sweep->add_option("--envs", sweep_envs, "Shared environments per grid point");

  CLI::App* ablate = app.add_subcommand("ablate", "Run an ablation suite");
  add_common(ablate, ablate_o);
  std::string ablation_name;
  ablate->add_option("name", ablation_name, "recycle | embedding | horizon | priority_time")
      ->required();

  CLI::App* report = app.add_subcommand("report", "Re-aggregate raw campaign CSVs");
  std::string report_in;
  report->add_option("--in", report_in, "Campaign output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ipp::CampaignConfig config = resolve(gen_o);
      if (config.out_dir.empty()) config.out_dir = "out";
      fs::create_directories(config.out_dir);
      std::mt19937_64 rng(config.seed);
      ipp::EnvSpec spec = ipp::generate_env_spec(config.scenario.bounds,
                                                 config.scenario.cell_size,
                                                 config.scenario.env_dist, rng);
      spec.seed = config.seed;
      {
        std::ofstream os(fs::path(config.out_dir) / "env_spec.txt");
        spec.save(os);
      }
      const ipp::BeliefMap map = ipp::rasterize_env(spec);
      {
        std::ofstream os(fs::path(config.out_dir) / "belief_map.txt");
        map.save(os);
      }
      std::cout << "wrote " << config.out_dir << "/env_spec.txt and belief_map.txt ("
                << map.n_rows() << "x" << map.n_cols() << " cells, "
                << spec.clusters.size() << " clusters)\n";
    } else if (run->parsed()) {
      const ipp::CampaignConfig config = resolve(run_o);
      const ipp::CampaignResult result = ipp::run_campaign(config);
      ipp::write_campaign_outputs(config, result);
      std::cout << ipp::summary_csv_text(ipp::campaign_config_json(config), result.summary);
    } else if (sweep->parsed()) {
      const ipp::CampaignConfig config = resolve(sweep_o);
      if (extend_grid.empty()) extend_grid = {config.scenario.planner.extend_distance};
      if (near_grid.empty()) near_grid = {config.scenario.planner.near_radius};
      if (prune_grid.empty()) prune_grid = {config.scenario.planner.prune_radius};
      const auto points = ipp::run_sweep(config, extend_grid, near_grid, prune_grid, sweep_envs);
      ipp::write_sweep_csv(config, points);
      std::cout << "wrote " << config.out_dir << "/sweep.csv (" << points.size()
                << " grid points)\n";
    } else if (ablate->parsed()) {
      const ipp::CampaignConfig config = resolve(ablate_o);
      std::cout << ipp::run_ablation(ablation_name, config);
    } else if (report->parsed()) {
      const auto rows = ipp::aggregate_runs_csv(report_in);
      std::ostringstream cfg;
      {
        std::ifstream is(fs::path(report_in) / "runs.csv");
        std::string line;
        std::string config_json = "{}";
        while (std::getline(is, line)) {
          if (line.rfind("# config ", 0) == 0) {
            config_json = line.substr(9);
            break;
          }
        }
        cfg << config_json;
      }
      const std::string text = ipp::summary_csv_text(cfg.str(), rows);
      std::ofstream os(fs::path(report_in) / "summary_recomputed.csv");
      os << text;
      std::cout << text;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
