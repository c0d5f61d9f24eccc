#pragma once

#include <string>
#include <vector>

#include "gn/census.hpp"
#include "gn/config.hpp"

namespace gn {

// Runs the configured ensemble and writes all artifacts under out_dir:
// manifest.json (config + version + per-trial seeds + timestamp),
// trials/trial_#####.json, census.csv, aggregate.json. Identical
// (config, master_seed) produce byte-identical data files; only the
// manifest carries the timestamp. Returns the trajectories.
std::vector<Trajectory> run_experiment(const RunConfig& config, const std::string& out_dir);

// Census trajectories for each p, one subdirectory per value, plus
// phase_table.csv rows (p, k_p, k, stabilization fraction, mean counts).
void sweep(const std::vector<double>& p_values, const RunConfig& config_template,
           const std::string& out_dir);

// Re-derives the human-readable summary and plot CSVs from a completed
// experiment directory; idempotent.
void report(const std::string& artifact_dir);

// Per-trial trajectories of an ensemble, dispatched over a worker pool;
// results are positioned by trial index, so the output is identical
// regardless of the pool size.
std::vector<Trajectory> run_ensemble(const RunConfig& config);

}  // namespace gn
