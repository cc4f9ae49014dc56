#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tubesim/scenario.hpp"
#include "tubesim/simulation.hpp"

namespace tubesim {

/// One parameter sweep description.
///
/// [grid] entries list explicit values (cartesian product across keys);
/// [monte_carlo] entries are [mean, std] normal draws, one per run. Keys are
/// dotted scenario paths and may be quoted in the file.
struct SweepSpec {
  struct GridAxis {
    std::string key;
    std::vector<double> values;
  };
  struct RandomAxis {
    std::string key;
    double mean = 0.0;
    double std = 0.0;
  };
  std::vector<GridAxis> grid;
  std::vector<RandomAxis> random;

  /// Number of grid combinations (1 when no grid axes are given).
  size_t grid_size() const;
};

SweepSpec load_sweep_spec(const std::string& path);
SweepSpec sweep_spec_from_toml(const toml::Document& doc);

struct SweepRun {
  size_t index = 0;
  std::vector<std::pair<std::string, double>> overrides;
  uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunReport report;
};

struct SweepResult {
  std::vector<SweepRun> runs;
  size_t successes = 0;   // runs that completed without throwing
  size_t flight_ok = 0;   // reports with success() == true
};

/// Runs `count` scenarios per grid combination, seeds base_seed + run index,
/// spread over `jobs` worker threads. Order of results is deterministic.
SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int count,
                      int jobs);

/// One CSV line per run: index, overrides, seed, outcome, key report fields,
/// then a trailing comment block with per-column summary statistics.
std::string sweep_to_csv(const SweepSpec& spec, const SweepResult& result);

}  // namespace tubesim
