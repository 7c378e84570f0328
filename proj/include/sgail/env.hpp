#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "sgail/distribution.hpp"
#include "sgail/grid_world.hpp"
#include "sgail/reacher.hpp"
#include "sgail/trajectory.hpp"

namespace sgail {

/// Conditional policy callable: (state features, task one-hot) -> distribution.
using PolicyFn = std::function<ActionDistribution(std::span<const double> features,
                                                  std::span<const double> task)>;

/// Uniform episode interface over raw state vectors. Immutable after
/// construction; rollouts carry their own RNG state.
class Env {
  public:
    virtual ~Env() = default;
    virtual std::string id() const = 0;
    virtual int state_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual bool discrete_actions() const = 0;
    virtual int feature_dim() const = 0;
    virtual int num_tasks() const = 0;
    virtual int task_dim() const = 0;
    virtual int horizon() const = 0;
    virtual std::vector<double> featurize(std::span<const double> state) const = 0;
    virtual std::vector<double> sample_start(int task, std::mt19937_64& rng) const = 0;
    virtual std::vector<double> step(std::span<const double> state,
                                     std::span<const double> action) const = 0;
    virtual bool is_success(int task, std::span<const double> state) const = 0;
    virtual std::vector<Trajectory> expert(int task, int n, std::uint64_t seed) const = 0;
    /// Every admissible evaluation start (sweep mode); empty when the state
    /// space cannot be enumerated.
    virtual std::vector<std::vector<double>> enumerate_starts(int task) const { return {}; }
};

class GridEnv : public Env {
  public:
    explicit GridEnv(GridWorld world) : world_(std::move(world)) {}
    const GridWorld& world() const { return world_; }

    std::string id() const override { return "grid"; }
    int state_dim() const override { return 2; }
    int action_dim() const override { return 4; }
    bool discrete_actions() const override { return true; }
    int feature_dim() const override { return 2; }
    int num_tasks() const override { return world_.num_tasks(); }
    int task_dim() const override { return 3; }
    int horizon() const override { return world_.horizon(); }
    std::vector<double> featurize(std::span<const double> state) const override;
    std::vector<double> sample_start(int task, std::mt19937_64& rng) const override;
    std::vector<double> step(std::span<const double> state,
                             std::span<const double> action) const override;
    bool is_success(int task, std::span<const double> state) const override;
    std::vector<Trajectory> expert(int task, int n, std::uint64_t seed) const override;
    std::vector<std::vector<double>> enumerate_starts(int task) const override;

  private:
    GridCell to_cell(std::span<const double> state) const;
    GridWorld world_;
};

class ReacherEnv : public Env {
  public:
    explicit ReacherEnv(ReacherWorld world) : world_(ReacherWorld::make(std::move(world))) {}
    const ReacherWorld& world() const { return world_; }

    std::string id() const override { return "reacher"; }
    int state_dim() const override { return 6; }
    int action_dim() const override { return 2; }
    bool discrete_actions() const override { return false; }
    int feature_dim() const override { return 6; }
    int num_tasks() const override { return world_.num_tasks(); }
    int task_dim() const override { return 3; }
    int horizon() const override { return world_.horizon; }
    std::vector<double> featurize(std::span<const double> state) const override;
    std::vector<double> sample_start(int task, std::mt19937_64& rng) const override;
    std::vector<double> step(std::span<const double> state,
                             std::span<const double> action) const override;
    bool is_success(int task, std::span<const double> state) const override;
    std::vector<Trajectory> expert(int task, int n, std::uint64_t seed) const override;

  private:
    ReacherWorld world_;
};

/// Samples one episode from `policy` until the task's success condition or
/// the horizon; deterministic given the seed.
Trajectory rollout(const Env& env, const PolicyFn& policy, int task, std::uint64_t rng_seed,
                   bool greedy = false);
Trajectory rollout_from(const Env& env, const PolicyFn& policy, int task,
                        std::span<const double> start, std::uint64_t rng_seed,
                        bool greedy = false);

/// Success count over n_trials independent rollouts from random starts.
int evaluate(const Env& env, const PolicyFn& policy, int task, int n_trials,
             std::uint64_t rng_seed, bool greedy = false);

/// Success count over one rollout from every enumerable start.
/// Returns {successes, trials}.
std::pair<int, int> evaluate_sweep(const Env& env, const PolicyFn& policy, int task,
                                   std::uint64_t rng_seed, bool greedy = false);

} // namespace sgail
