#pragma once

#include <utility>
#include <vector>

#include "sgail/grid_world.hpp"

namespace sgail {
namespace oracle {

/// Discounted tabular MDP with an entropy-regularization weight. Transitions
/// are sparse probability rows over successor states.
struct TabularMDP {
    int n_states = 0;
    int n_actions = 0;
    // transition[s][a] = list of (next_state, probability), each row sums to 1
    std::vector<std::vector<std::vector<std::pair<int, double>>>> transition;
    // reward[s][a]
    std::vector<std::vector<double>> reward;
    double gamma = 0.95;
    double omega = 1.0;

    void validate() const;
};

struct SoftSolution {
    std::vector<double> v;              // V*(s)
    std::vector<std::vector<double>> q; // Q*(s,a)
    std::vector<std::vector<double>> pi; // pi*(a|s) = exp((Q-V)/omega)
    double residual = 0.0;              // sup |T(V) - V| of the returned V
    int iterations = 0;
};

/// Soft value iteration: V(s) <- omega * logsumexp_a[(R + gamma E V') / omega]
/// to a fixed point within tol. Throws on non-convergence.
SoftSolution soft_value_iteration(const TabularMDP& mdp, double tol, int max_iterations = 200000);

/// A*(s,a) = Q* - V*; equals omega * log pi* at the soft optimum.
std::vector<std::vector<double>> soft_advantage(const SoftSolution& sol);

struct BfsResult {
    int length = 0;
    std::vector<GridCell> path; // start..goal inclusive
};

/// Minimal step count under the grid adjacency, deterministic tie-break by
/// the fixed direction priority. Throws when the goal is unreachable.
BfsResult bfs_shortest_path(const GridWorld& world, GridCell start, GridCell goal);

/// Exact mutual information of a discrete joint table p(c, x), in nats.
double mutual_information_exact(const std::vector<std::vector<double>>& joint);

/// Builds the tabular MDP of a grid task: free cells x 4 actions,
/// deterministic moves, reward +1 on transitions entering the goal, goal
/// absorbing with zero reward.
struct GridMdp {
    TabularMDP mdp;
    std::vector<GridCell> cells;            // state index -> cell
    std::vector<std::vector<int>> cell_index; // [y][x] -> state index or -1
};
GridMdp grid_tabular_mdp(const GridWorld& world, int task, double gamma, double omega);

} // namespace oracle
} // namespace sgail
