#include "sgail/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "sgail/approximator.hpp"

namespace sgail {
namespace oracle {

void TabularMDP::validate() const {
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("tabular mdp needs >= 1 state and action");
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must lie in [0,1)");
    if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
    if (static_cast<int>(transition.size()) != n_states ||
        static_cast<int>(reward.size()) != n_states)
        throw std::invalid_argument("tabular mdp table sizes mismatch");
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(transition[s].size()) != n_actions ||
            static_cast<int>(reward[s].size()) != n_actions)
            throw std::invalid_argument("tabular mdp row sizes mismatch");
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (auto [ns, p] : transition[s][a]) {
                if (ns < 0 || ns >= n_states)
                    throw std::invalid_argument("transition target out of range");
                if (p < 0.0) throw std::invalid_argument("negative transition probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("transition row does not sum to 1");
        }
    }
}

SoftSolution soft_value_iteration(const TabularMDP& mdp, double tol, int max_iterations) {
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    mdp.validate();

    std::vector<double> v(mdp.n_states, 0.0);
    std::vector<double> v_next(mdp.n_states, 0.0);
    std::vector<double> backup(mdp.n_actions);

    auto apply = [&](const std::vector<double>& cur, std::vector<double>& out) {
        double gap = 0.0;
        for (int s = 0; s < mdp.n_states; ++s) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                double ev = 0.0;
                for (auto [ns, p] : mdp.transition[s][a]) ev += p * cur[ns];
                backup[a] = (mdp.reward[s][a] + mdp.gamma * ev) / mdp.omega;
            }
            out[s] = mdp.omega * log_sum_exp(backup);
            gap = std::max(gap, std::abs(out[s] - cur[s]));
        }
        return gap;
    };

    int it = 0;
    double gap = 0.0;
    for (; it < max_iterations; ++it) {
        gap = apply(v, v_next);
        v.swap(v_next);
        if (gap <= tol) break;
    }
    if (gap > tol) throw std::runtime_error("soft value iteration did not converge");

    SoftSolution sol;
    sol.iterations = it + 1;
    sol.v = v;
    sol.residual = apply(v, v_next);
    sol.q.assign(mdp.n_states, std::vector<double>(mdp.n_actions, 0.0));
    sol.pi.assign(mdp.n_states, std::vector<double>(mdp.n_actions, 0.0));
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            double ev = 0.0;
            for (auto [ns, p] : mdp.transition[s][a]) ev += p * v[ns];
            sol.q[s][a] = mdp.reward[s][a] + mdp.gamma * ev;
            sol.pi[s][a] = std::exp((sol.q[s][a] - v[s]) / mdp.omega);
        }
    }
    return sol;
}

std::vector<std::vector<double>> soft_advantage(const SoftSolution& sol) {
    std::vector<std::vector<double>> adv(sol.q.size());
    for (std::size_t s = 0; s < sol.q.size(); ++s) {
        adv[s].resize(sol.q[s].size());
        for (std::size_t a = 0; a < sol.q[s].size(); ++a) adv[s][a] = sol.q[s][a] - sol.v[s];
    }
    return adv;
}

BfsResult bfs_shortest_path(const GridWorld& world, GridCell start, GridCell goal) {
    if (!world.is_free(start) || !world.is_free(goal))
        throw std::invalid_argument("bfs endpoints must be free cells");

    std::array<std::array<int, GridWorld::kWidth>, GridWorld::kHeight> dist{};
    std::array<std::array<GridCell, GridWorld::kWidth>, GridWorld::kHeight> pred{};
    for (auto& row : dist) row.fill(-1);

    std::deque<GridCell> frontier{start};
    dist[start.y][start.x] = 0;
    while (!frontier.empty() && dist[goal.y][goal.x] < 0) {
        GridCell c = frontier.front();
        frontier.pop_front();
        for (int d = 0; d < 4; ++d) {
            GridCell n = grid_step(world, c, d);
            if (!(n == c) && dist[n.y][n.x] < 0) {
                dist[n.y][n.x] = dist[c.y][c.x] + 1;
                pred[n.y][n.x] = c;
                frontier.push_back(n);
            }
        }
    }
    if (dist[goal.y][goal.x] < 0) throw std::runtime_error("goal unreachable from start");

    BfsResult res;
    res.length = dist[goal.y][goal.x];
    res.path.resize(res.length + 1);
    GridCell c = goal;
    for (int i = res.length; i >= 0; --i) {
        res.path[i] = c;
        if (i > 0) c = pred[c.y][c.x];
    }
    return res;
}

double mutual_information_exact(const std::vector<std::vector<double>>& joint) {
    if (joint.empty() || joint[0].empty()) throw std::invalid_argument("empty joint table");
    const std::size_t rows = joint.size(), cols = joint[0].size();
    std::vector<double> pc(rows, 0.0), px(cols, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < rows; ++c) {
        if (joint[c].size() != cols) throw std::invalid_argument("ragged joint table");
        for (std::size_t x = 0; x < cols; ++x) {
            const double p = joint[c][x];
            if (p < 0.0 || !std::isfinite(p))
                throw std::invalid_argument("joint probabilities must be nonnegative");
            pc[c] += p;
            px[x] += p;
            total += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("joint table must sum to 1");

    double mi = 0.0;
    for (std::size_t c = 0; c < rows; ++c)
        for (std::size_t x = 0; x < cols; ++x) {
            const double p = joint[c][x];
            if (p > 0.0) mi += p * std::log(p / (pc[c] * px[x]));
        }
    return mi;
}

GridMdp grid_tabular_mdp(const GridWorld& world, int task, double gamma, double omega) {
    GridMdp g;
    g.cells = world.free_cells();
    g.cell_index.assign(GridWorld::kHeight, std::vector<int>(GridWorld::kWidth, -1));
    for (std::size_t i = 0; i < g.cells.size(); ++i)
        g.cell_index[g.cells[i].y][g.cells[i].x] = static_cast<int>(i);

    const GridCell goal = world.goals().at(task);
    const int n = static_cast<int>(g.cells.size());
    g.mdp.n_states = n;
    g.mdp.n_actions = 4;
    g.mdp.gamma = gamma;
    g.mdp.omega = omega;
    g.mdp.transition.assign(n, std::vector<std::vector<std::pair<int, double>>>(4));
    g.mdp.reward.assign(n, std::vector<double>(4, 0.0));
    for (int s = 0; s < n; ++s) {
        const GridCell c = g.cells[s];
        const bool absorbing = c == goal;
        for (int a = 0; a < 4; ++a) {
            GridCell nc = absorbing ? c : grid_step(world, c, a);
            g.mdp.transition[s][a] = {{g.cell_index[nc.y][nc.x], 1.0}};
            if (!absorbing && nc == goal) g.mdp.reward[s][a] = 1.0;
        }
    }
    return g;
}

} // namespace oracle
} // namespace sgail
