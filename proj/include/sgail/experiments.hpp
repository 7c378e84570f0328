#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgail/io.hpp"

namespace sgail {

/// One training condition of an experiment (a variant plus its overrides).
struct RunSpec {
    std::string condition;
    TrainConfig cfg;
};

struct ExperimentPlan {
    std::string id;
    std::vector<RunSpec> runs;
    std::vector<std::uint64_t> seeds;
    std::uint64_t expert_seed = 9000;
};

/// Experiment ids: grid-variants, grid-erc, grid-singleVsMulti, reacher.
ExperimentPlan plan_experiment(const std::string& id, const Config& cfg);

/// Expert demonstration sets for a run (one per task), deterministic in
/// expert_seed and shared across model seeds.
std::vector<std::vector<Trajectory>> make_expert_data(const Env& env, int per_task,
                                                      std::uint64_t expert_seed);

/// Trains one (condition, seed) run and writes metrics.csv, checkpoint.txt,
/// per-task heatmaps (grid only), expert_data.csv and manifest.txt under
/// run_dir. Returns the files written (relative to run_dir).
std::vector<std::string> execute_run(const RunSpec& run, const Env& env,
                                     std::uint64_t seed, std::uint64_t expert_seed,
                                     const std::string& run_dir);

/// Full experiment: every (condition, seed) run plus the across-seed median
/// summary.csv and a manifest over all outputs. Returns files relative to
/// out_dir. `jobs` > 1 runs independent (condition, seed) pairs in parallel.
std::vector<std::string> run_experiment(const Config& cfg, const std::string& out_dir,
                                        int jobs = 1);

} // namespace sgail
