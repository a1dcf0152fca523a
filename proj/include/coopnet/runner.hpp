#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "coopnet/config.hpp"

namespace coopnet {

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed; // overrides sim.seed
  std::optional<std::string> out;    // overrides output_path
  bool trace = false;                // per-realization dump to <out>.trace
};

// Sweep/point evaluation of the configured strategies and engines; writes
// one CSV. Returns a process exit code (nonzero on hard failures).
int run_experiment(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);

// Placement optimization (per sweep cell when a sweep is configured);
// writes CSV rows (axis, n, t_star).
int run_optimize(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);

// All four strategies under one config; asserts the analytic ordering
// optimal >= baselines and reports Monte Carlo CI overlaps.
int run_compare(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);

} // namespace coopnet
