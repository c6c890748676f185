#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "ipp/scenarios.hpp"
#include "ipp/simulator.hpp"
#include "ipp/stats.hpp"

namespace ipp {

/// Monte Carlo campaign setup. Within a trial every planner and budget
/// consumes the same environment (paired comparisons).
struct CampaignConfig {
  std::string scale = "desk";  // desk | field
  Scenario scenario;           // resolved scenario (scale + overrides applied)
  std::vector<std::string> planners{"informed_tree", "greedy", "mcts", "random", "coverage"};
  int trials = 30;
  std::vector<double> budgets;  // empty: scenario default budget
  std::uint64_t seed = 1;
  bool deterministic = true;
  int workers = 1;
  std::string out_dir = "out";
};

CampaignConfig make_campaign_config(const std::string& scale);
CampaignConfig load_campaign_config(std::istream& is);  // JSON
/// Canonical JSON echo embedded in every output file.
std::string campaign_config_json(const CampaignConfig& config);

/// splitmix64-based seed derivation.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                       std::uint64_t d = 0);

/// Known names: informed_tree, informed_tree_fresh, greedy, mcts, random,
/// coverage.
std::unique_ptr<PlannerBase> make_planner(const std::string& name, const Scenario& sc,
                                          std::uint64_t seed, bool deterministic);

/// Environment drawn from the scenario's prior distribution.
Environment make_environment(const Scenario& sc, std::uint64_t env_seed, double budget);

struct RunRecord {
  int trial = 0;
  std::string planner;
  double budget = 0.0;
  std::uint64_t env_seed = 0;
  std::uint64_t run_seed = 0;
  bool ok = false;
  std::string error;
  MissionReport report;
};

struct SummaryRow {
  std::string planner;
  double budget = 0.0;
  MeanCi stats;
  int failures = 0;
};

struct CampaignResult {
  std::vector<RunRecord> runs;
  std::vector<SummaryRow> summary;
};

CampaignResult run_campaign(const CampaignConfig& config);
void write_campaign_outputs(const CampaignConfig& config, const CampaignResult& result);

/// Rebuilds the summary from <dir>/runs.csv; byte-compatible with the
/// summary the campaign emitted.
std::vector<SummaryRow> aggregate_runs_csv(const std::string& dir);
std::string summary_csv_text(const std::string& config_json,
                             const std::vector<SummaryRow>& rows);

struct SweepPoint {
  double extend = 0.0;
  double near = 0.0;
  double prune = 0.0;
  MeanCi stats;
};

std::vector<SweepPoint> run_sweep(const CampaignConfig& config,
                                  const std::vector<double>& extend_grid,
                                  const std::vector<double>& near_grid,
                                  const std::vector<double>& prune_grid, int envs);
void write_sweep_csv(const CampaignConfig& config, const std::vector<SweepPoint>& points);

/// Named ablation suites: recycle | embedding | horizon | priority_time.
/// Writes CSV tables under config.out_dir and returns a printable digest.
std::string run_ablation(const std::string& name, const CampaignConfig& config);

}  // namespace ipp
