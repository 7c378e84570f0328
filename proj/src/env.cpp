#include "sgail/env.hpp"

#include <cmath>
#include <stdexcept>

namespace sgail {

GridCell GridEnv::to_cell(std::span<const double> state) const {
    if (state.size() != 2) throw std::invalid_argument("grid state must have 2 entries");
    GridCell c{static_cast<int>(std::lround(state[0])), static_cast<int>(std::lround(state[1]))};
    if (!world_.is_free(c)) throw std::invalid_argument("grid state is not a free cell");
    return c;
}

std::vector<double> GridEnv::featurize(std::span<const double> state) const {
    GridCell c = to_cell(state);
    return {c.x / 10.0, c.y / 10.0};
}

std::vector<double> GridEnv::sample_start(int task, std::mt19937_64& rng) const {
    const GridCell goal = world_.goals().at(task);
    std::vector<GridCell> starts;
    for (GridCell c : world_.free_cells())
        if (!(c == goal)) starts.push_back(c);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    GridCell s = starts[pick(rng)];
    return {double(s.x), double(s.y)};
}

std::vector<double> GridEnv::step(std::span<const double> state,
                                  std::span<const double> action) const {
    GridCell n = grid_step(world_, to_cell(state), action);
    return {double(n.x), double(n.y)};
}

bool GridEnv::is_success(int task, std::span<const double> state) const {
    return to_cell(state) == world_.goals().at(task);
}

std::vector<Trajectory> GridEnv::expert(int task, int n, std::uint64_t seed) const {
    return expert_grid(world_, TaskVariable::make(task, task_dim()), n, seed);
}

std::vector<std::vector<double>> GridEnv::enumerate_starts(int task) const {
    const GridCell goal = world_.goals().at(task);
    std::vector<std::vector<double>> starts;
    for (GridCell c : world_.free_cells())
        if (!(c == goal)) starts.push_back({double(c.x), double(c.y)});
    return starts;
}

std::vector<double> ReacherEnv::featurize(std::span<const double> state) const {
    return {state.begin(), state.end()};
}

std::vector<double> ReacherEnv::sample_start(int /*task*/, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> theta1(-3.0, 1.3);
    return reacher_state(theta1(rng), 0.0);
}

std::vector<double> ReacherEnv::step(std::span<const double> state,
                                     std::span<const double> action) const {
    return reacher_step(world_, state, action);
}

bool ReacherEnv::is_success(int task, std::span<const double> state) const {
    const auto& target = world_.targets.at(task);
    const auto tip = tip_position(world_, state);
    return std::hypot(target[0] - tip[0], target[1] - tip[1]) <= world_.success_radius;
}

std::vector<Trajectory> ReacherEnv::expert(int task, int n, std::uint64_t seed) const {
    return expert_reacher(world_, TaskVariable::make(task, task_dim()), n, seed);
}

Trajectory rollout_from(const Env& env, const PolicyFn& policy, int task,
                        std::span<const double> start, std::uint64_t rng_seed, bool greedy) {
    std::mt19937_64 rng(rng_seed);
    Trajectory traj;
    traj.task = TaskVariable::make(task, env.task_dim());

    std::vector<double> state(start.begin(), start.end());
    if (env.is_success(task, state)) {
        traj.terminal = true;
        return traj;
    }
    for (int t = 0; t < env.horizon(); ++t) {
        auto dist = policy(env.featurize(state), traj.task.onehot);
        dist.validate();
        auto action = greedy ? dist.greedy() : dist.sample(rng);
        auto next = env.step(state, action);
        traj.steps.push_back({state, std::move(action), next});
        state = std::move(next);
        if (env.is_success(task, state)) {
            traj.terminal = true;
            break;
        }
    }
    traj.validate();
    return traj;
}

Trajectory rollout(const Env& env, const PolicyFn& policy, int task, std::uint64_t rng_seed,
                   bool greedy) {
    std::mt19937_64 rng(rng_seed);
    std::vector<double> start = env.sample_start(task, rng);
    // Hand the already-advanced RNG state on via a derived seed so the action
    // stream does not replay the start draw.
    std::uint64_t action_seed = rng();
    return rollout_from(env, policy, task, start, action_seed, greedy);
}

int evaluate(const Env& env, const PolicyFn& policy, int task, int n_trials,
             std::uint64_t rng_seed, bool greedy) {
    if (n_trials < 0) throw std::invalid_argument("evaluate: n_trials must be >= 0");
    std::mt19937_64 seeder(rng_seed);
    int successes = 0;
    for (int i = 0; i < n_trials; ++i)
        if (rollout(env, policy, task, seeder(), greedy).terminal) ++successes;
    return successes;
}

std::pair<int, int> evaluate_sweep(const Env& env, const PolicyFn& policy, int task,
                                   std::uint64_t rng_seed, bool greedy) {
    auto starts = env.enumerate_starts(task);
    if (starts.empty())
        throw std::invalid_argument("evaluate_sweep: environment cannot enumerate starts");
    std::mt19937_64 seeder(rng_seed);
    int successes = 0;
    for (const auto& s : starts)
        if (rollout_from(env, policy, task, s, seeder(), greedy).terminal) ++successes;
    return {successes, static_cast<int>(starts.size())};
}

} // namespace sgail
