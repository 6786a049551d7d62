#pragma once

#include "gibbslab/certify.hpp"
#include "gibbslab/config.hpp"

namespace gibbslab {

struct RunResult {
  int exit_code = 0;  // 0 all pass, 1 check failure, 2 config/dimension error
  Json report;
};

// Executes the configured checks, writes report.json and per-check CSV
// tables into out_dir; the report carries every tolerance and seed used.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                         std::ostream* log = nullptr);

// The mixing-scan front-end: h-norm vs l with the exponential fit.
RunResult run_mixing_scan(const ExperimentConfig& cfg, const std::string& out_dir,
                          std::ostream* log = nullptr);

// Trajectory front-end: evolves the configured initial state over the time
// grid and writes the (t, D, trace-distance, EP) table.
RunResult run_evolve(const ExperimentConfig& cfg, const std::string& out_dir,
                     std::ostream* log = nullptr);

}  // namespace gibbslab
