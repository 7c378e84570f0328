#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sgail/approximator.hpp"
#include "sgail/oracle.hpp"

using namespace sgail;
using namespace sgail::oracle;

namespace {

TabularMDP bandit(double gamma, double omega, std::vector<double> rewards) {
    TabularMDP m;
    m.n_states = 1;
    m.n_actions = static_cast<int>(rewards.size());
    m.gamma = gamma;
    m.omega = omega;
    m.transition.assign(1, std::vector<std::vector<std::pair<int, double>>>(
                               m.n_actions, {{0, 1.0}}));
    m.reward.assign(1, std::move(rewards));
    return m;
}

// test-local Dijkstra with explicit priority queue, as a second algorithm
int dijkstra_length(const GridWorld& world, GridCell start, GridCell goal) {
    auto cells = world.free_cells();
    auto index = [&](GridCell c) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i] == c) return static_cast<int>(i);
        return -1;
    };
    std::vector<int> dist(cells.size(), 1 << 29);
    dist[index(start)] = 0;
    std::vector<bool> done(cells.size(), false);
    for (std::size_t iter = 0; iter < cells.size(); ++iter) {
        int u = -1;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!done[i] && (u < 0 || dist[i] < dist[u])) u = static_cast<int>(i);
        if (u < 0 || dist[u] >= (1 << 29)) break;
        done[u] = true;
        for (int d = 0; d < 4; ++d) {
            GridCell n = grid_step(world, cells[u], d);
            const int v = index(n);
            if (dist[u] + 1 < dist[v]) dist[v] = dist[u] + 1;
        }
    }
    return dist[index(goal)];
}

// standard (hard-max) value iteration for the omega -> 0 comparison
std::vector<int> greedy_policy_hard_vi(const TabularMDP& m, int sweeps = 2000) {
    std::vector<double> v(m.n_states, 0.0);
    for (int it = 0; it < sweeps; ++it) {
        std::vector<double> next(m.n_states);
        for (int s = 0; s < m.n_states; ++s) {
            double best = -1e300;
            for (int a = 0; a < m.n_actions; ++a) {
                double ev = 0.0;
                for (auto [ns, p] : m.transition[s][a]) ev += p * v[ns];
                best = std::max(best, m.reward[s][a] + m.gamma * ev);
            }
            next[s] = best;
        }
        v.swap(next);
    }
    std::vector<int> pi(m.n_states);
    for (int s = 0; s < m.n_states; ++s) {
        double best = -1e300;
        for (int a = 0; a < m.n_actions; ++a) {
            double ev = 0.0;
            for (auto [ns, p] : m.transition[s][a]) ev += p * v[ns];
            const double q = m.reward[s][a] + m.gamma * ev;
            if (q > best) {
                best = q;
                pi[s] = a;
            }
        }
    }
    return pi;
}

} // namespace

TEST_CASE("soft value iteration: single state analytic cases") {
    // one action: V = r / (1 - gamma), the entropy term vanishes
    auto single = bandit(0.9, 1.0, {2.0});
    auto sol = soft_value_iteration(single, 1e-13);
    CHECK(sol.v[0] == doctest::Approx(2.0 / (1.0 - 0.9)).epsilon(1e-10));
    CHECK(sol.residual <= 1e-12);

    // gamma = 0, two actions: V = logsumexp(r), pi = softmax(r)
    auto two = bandit(0.0, 1.0, {0.3, -1.2});
    auto sol2 = soft_value_iteration(two, 1e-13);
    const double lse = std::log(std::exp(0.3) + std::exp(-1.2));
    CHECK(sol2.v[0] == doctest::Approx(lse).epsilon(1e-12));
    CHECK(sol2.pi[0][0] == doctest::Approx(std::exp(0.3 - lse)).epsilon(1e-12));
    CHECK(sol2.pi[0][1] == doctest::Approx(std::exp(-1.2 - lse)).epsilon(1e-12));
}

TEST_CASE("soft value iteration on the default grid MDP") {
    GridWorld world = GridWorld::default_world();
    auto grid = grid_tabular_mdp(world, 0, 0.95, 1.0);
    auto sol = soft_value_iteration(grid.mdp, 1e-12);
    CHECK(sol.residual <= 1e-10);

    // the soft-optimal argmax points down the BFS gradient at every free cell
    auto field = grid_distance_field(world, world.goals()[0]);
    for (std::size_t s = 0; s < grid.cells.size(); ++s) {
        const GridCell c = grid.cells[s];
        if (c == world.goals()[0]) continue;
        int argmax = 0;
        for (int a = 1; a < 4; ++a)
            if (sol.pi[s][a] > sol.pi[s][argmax]) argmax = a;
        GridCell n = grid_step(world, c, argmax);
        CHECK(field[n.y][n.x] == field[c.y][c.x] - 1);
    }

    // policy rows are distributions
    for (const auto& row : sol.pi) {
        double sum = 0.0;
        for (double p : row) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("soft value iteration: successive gaps shrink monotonically") {
    GridWorld world = GridWorld::default_world();
    auto grid = grid_tabular_mdp(world, 1, 0.95, 1.0);
    // re-run the backup manually to watch the contraction
    std::vector<double> v(grid.mdp.n_states, 0.0);
    double prev_gap = 1e300;
    for (int it = 0; it < 60; ++it) {
        std::vector<double> next(v.size());
        double gap = 0.0;
        for (int s = 0; s < grid.mdp.n_states; ++s) {
            std::vector<double> backup(grid.mdp.n_actions);
            for (int a = 0; a < grid.mdp.n_actions; ++a) {
                double ev = 0.0;
                for (auto [ns, p] : grid.mdp.transition[s][a]) ev += p * v[ns];
                backup[a] = grid.mdp.reward[s][a] + grid.mdp.gamma * ev;
            }
            next[s] = log_sum_exp(backup);
            gap = std::max(gap, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (it > 0) CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
}

TEST_CASE("soft advantage identity A* = omega log pi*") {
    auto m = bandit(0.0, 1.0, {1.0, -0.5, 0.25});
    auto sol = soft_value_iteration(m, 1e-13);
    auto adv = soft_advantage(sol);
    for (int a = 0; a < 3; ++a)
        CHECK(adv[0][a] == doctest::Approx(m.omega * std::log(sol.pi[0][a])).epsilon(1e-9));

    // all rewards equal: A* = omega log(1/n) for every action
    auto flat = bandit(0.5, 2.0, {0.7, 0.7, 0.7, 0.7});
    auto flat_sol = soft_value_iteration(flat, 1e-13);
    auto flat_adv = soft_advantage(flat_sol);
    for (int a = 0; a < 4; ++a)
        CHECK(flat_adv[0][a] == doctest::Approx(2.0 * std::log(0.25)).epsilon(1e-9));

    // normalization: logsumexp over actions of A*/omega = 0 at every state
    GridWorld world = GridWorld::default_world();
    auto grid = grid_tabular_mdp(world, 0, 0.95, 1.0);
    auto gsol = soft_value_iteration(grid.mdp, 1e-12);
    auto gadv = soft_advantage(gsol);
    for (const auto& row : gadv) {
        CHECK(std::abs(log_sum_exp(row)) <= 1e-9);
    }
}

TEST_CASE("soft argmax agrees with hard value iteration as omega -> 0") {
    GridWorld world = GridWorld::default_world();
    auto grid = grid_tabular_mdp(world, 0, 0.95, 1e-3);
    auto soft = soft_value_iteration(grid.mdp, 1e-11);
    auto hard = greedy_policy_hard_vi(grid.mdp);
    auto field = grid_distance_field(world, world.goals()[0]);
    for (std::size_t s = 0; s < grid.cells.size(); ++s) {
        if (grid.cells[s] == world.goals()[0]) continue;
        int argmax = 0;
        for (int a = 1; a < 4; ++a)
            if (soft.pi[s][a] > soft.pi[s][argmax]) argmax = a;
        // both greedy choices must descend the BFS field (ties allowed)
        GridCell soft_next = grid_step(world, grid.cells[s], argmax);
        GridCell hard_next = grid_step(world, grid.cells[s], hard[s]);
        CHECK(field[soft_next.y][soft_next.x] == field[hard_next.y][hard_next.x]);
    }
}

TEST_CASE("bfs shortest path") {
    GridWorld world = GridWorld::default_world();
    auto zero = bfs_shortest_path(world, {3, 3}, {3, 3});
    CHECK(zero.length == 0);
    CHECK(zero.path.size() == 1);

    auto one = bfs_shortest_path(world, {3, 3}, {4, 3});
    CHECK(one.length == 1);

    auto diag = bfs_shortest_path(world, {10, 0}, {0, 0});
    CHECK(diag.length == dijkstra_length(world, {10, 0}, {0, 0}));
    CHECK(diag.length == 10);
    CHECK(diag.path.front() == GridCell{10, 0});
    CHECK(diag.path.back() == GridCell{0, 0});
    for (std::size_t i = 0; i + 1 < diag.path.size(); ++i) {
        const int dist = std::abs(diag.path[i].x - diag.path[i + 1].x) +
                         std::abs(diag.path[i].y - diag.path[i + 1].y);
        CHECK(dist == 1);
    }

    // routes around the central block match Dijkstra as well
    std::mt19937_64 rng(12);
    auto cells = world.free_cells();
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    for (int trial = 0; trial < 25; ++trial) {
        GridCell a = cells[pick(rng)], b = cells[pick(rng)];
        CHECK(bfs_shortest_path(world, a, b).length == dijkstra_length(world, a, b));
    }
}

TEST_CASE("exact mutual information") {
    // product distribution
    CHECK(mutual_information_exact({{0.25, 0.25}, {0.25, 0.25}}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // perfectly correlated uniform binary pair
    CHECK(mutual_information_exact({{0.5, 0.0}, {0.0, 0.5}}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // fixed reference value, high-precision summation
    CHECK(mutual_information_exact({{0.4, 0.1}, {0.1, 0.4}}) ==
          doctest::Approx(0.192745).epsilon(1e-5));

    CHECK_THROWS_AS(mutual_information_exact({{0.9, 0.0}, {0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(mutual_information_exact({{1.2, -0.2}, {0.0, 0.0}}), std::invalid_argument);

    // nonnegative and symmetric under transposition
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<double>> joint(3, std::vector<double>(4));
        double total = 0.0;
        for (auto& row : joint)
            for (double& p : row) {
                p = unif(rng);
                total += p;
            }
        for (auto& row : joint)
            for (double& p : row) p /= total;
        const double mi = mutual_information_exact(joint);
        CHECK(mi >= -1e-12);
        std::vector<std::vector<double>> flipped(4, std::vector<double>(3));
        for (int c = 0; c < 3; ++c)
            for (int x = 0; x < 4; ++x) flipped[x][c] = joint[c][x];
        CHECK(mutual_information_exact(flipped) == doctest::Approx(mi).epsilon(1e-10));
    }
}

TEST_CASE("tabular mdp validation") {
    auto m = bandit(0.95, 1.0, {1.0});
    CHECK_NOTHROW(m.validate());
    m.transition[0][0] = {{0, 0.5}};
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.transition[0][0] = {{0, 1.0}};
    m.gamma = 1.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
