#include "sgail/grid_world.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace sgail {

TaskVariable TaskVariable::make(int index, int dim) {
    if (index < 0 || index >= dim) throw std::invalid_argument("task index out of range");
    TaskVariable t;
    t.onehot.assign(dim, 0.0);
    t.onehot[index] = 1.0;
    return t;
}

int TaskVariable::index() const {
    validate();
    for (std::size_t i = 0; i < onehot.size(); ++i)
        if (onehot[i] == 1.0) return static_cast<int>(i);
    throw std::invalid_argument("task variable has no hot entry");
}

void TaskVariable::validate() const {
    int hot = 0;
    for (double v : onehot) {
        if (v == 1.0)
            ++hot;
        else if (v != 0.0)
            throw std::invalid_argument("task variable entries must be 0 or 1");
    }
    if (hot != 1) throw std::invalid_argument("task variable must have exactly one hot entry");
}

void Trajectory::validate() const {
    for (std::size_t t = 0; t + 1 < steps.size(); ++t)
        if (steps[t].next_state != steps[t + 1].state)
            throw std::invalid_argument("trajectory chaining violated at step " + std::to_string(t));
}

static const char* kDefaultLayout =
    "..........2\n"
    "...........\n"
    "...........\n"
    "...........\n"
    "...........\n"
    "....###....\n"
    "...........\n"
    "...........\n"
    "...........\n"
    "...........\n"
    "1..........\n";

const std::string& GridWorld::default_layout_text() {
    static const std::string text = kDefaultLayout;
    return text;
}

GridWorld GridWorld::from_layout(const std::string& text, int horizon) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (static_cast<int>(rows.size()) != kHeight)
        throw std::invalid_argument("grid layout must have exactly 11 rows");
    if (horizon < 0) throw std::invalid_argument("grid horizon must be >= 0");

    GridWorld w;
    w.horizon_ = horizon;
    std::vector<std::pair<int, GridCell>> goals;
    for (int r = 0; r < kHeight; ++r) {
        const std::string& line = rows[r];
        if (static_cast<int>(line.size()) != kWidth)
            throw std::invalid_argument("grid layout row must have exactly 11 cells");
        const int y = kHeight - 1 - r; // top line of the file is the highest y
        for (int x = 0; x < kWidth; ++x) {
            char ch = line[x];
            if (ch == '#') {
                w.puddle_[y][x] = true;
            } else if (ch >= '1' && ch <= '9') {
                goals.emplace_back(ch - '1', GridCell{x, y});
            } else if (ch != '.') {
                throw std::invalid_argument(std::string("unknown layout character '") + ch + "'");
            }
        }
    }
    if (goals.empty()) throw std::invalid_argument("grid layout has no goals");
    std::sort(goals.begin(), goals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < goals.size(); ++i) {
        if (goals[i].first != static_cast<int>(i))
            throw std::invalid_argument("grid goals must be numbered consecutively from 1");
        w.goals_.push_back(goals[i].second);
    }
    for (GridCell g : w.goals_)
        if (w.is_puddle(g)) throw std::invalid_argument("goal placed on a puddle cell");
    w.check_connectivity();
    return w;
}

GridWorld GridWorld::default_world(int horizon) {
    return from_layout(default_layout_text(), horizon);
}

bool GridWorld::in_bounds(GridCell c) const {
    return c.x >= 0 && c.x < kWidth && c.y >= 0 && c.y < kHeight;
}

bool GridWorld::is_puddle(GridCell c) const {
    return in_bounds(c) && puddle_[c.y][c.x];
}

std::vector<GridCell> GridWorld::free_cells() const {
    std::vector<GridCell> cells;
    for (int y = 0; y < kHeight; ++y)
        for (int x = 0; x < kWidth; ++x)
            if (!puddle_[y][x]) cells.push_back({x, y});
    return cells;
}

std::string GridWorld::to_layout() const {
    std::string out;
    for (int r = 0; r < kHeight; ++r) {
        const int y = kHeight - 1 - r;
        for (int x = 0; x < kWidth; ++x) {
            char ch = puddle_[y][x] ? '#' : '.';
            for (std::size_t g = 0; g < goals_.size(); ++g)
                if (goals_[g] == GridCell{x, y}) ch = static_cast<char>('1' + g);
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

void GridWorld::check_connectivity() const {
    const auto free = free_cells();
    for (GridCell goal : goals_) {
        auto dist = grid_distance_field(*this, goal);
        for (GridCell c : free)
            if (dist[c.y][c.x] < 0)
                throw std::invalid_argument("grid layout disconnects cell (" +
                                            std::to_string(c.x) + "," + std::to_string(c.y) +
                                            ") from a goal");
    }
}

static constexpr int kDx[4] = {1, 0, -1, 0};
static constexpr int kDy[4] = {0, 1, 0, -1};

GridCell grid_step(const GridWorld& world, GridCell s, int direction) {
    if (direction < 0 || direction > 3) throw std::invalid_argument("grid action out of range");
    if (!world.is_free(s)) throw std::invalid_argument("grid state is not a free cell");
    GridCell t{s.x + kDx[direction], s.y + kDy[direction]};
    return world.is_free(t) ? t : s;
}

GridCell grid_step(const GridWorld& world, GridCell s, std::span<const double> action_onehot) {
    return grid_step(world, s, action_index(action_onehot));
}

int action_index(std::span<const double> onehot) {
    int hot = -1;
    for (std::size_t i = 0; i < onehot.size(); ++i) {
        if (onehot[i] == 1.0) {
            if (hot >= 0) throw std::invalid_argument("action vector has multiple hot entries");
            hot = static_cast<int>(i);
        } else if (onehot[i] != 0.0) {
            throw std::invalid_argument("action vector entries must be 0 or 1");
        }
    }
    if (hot < 0) throw std::invalid_argument("action vector has no hot entry");
    return hot;
}

std::vector<double> action_onehot(int direction, int dim) {
    if (direction < 0 || direction >= dim) throw std::invalid_argument("action index out of range");
    std::vector<double> v(dim, 0.0);
    v[direction] = 1.0;
    return v;
}

std::array<std::array<int, GridWorld::kWidth>, GridWorld::kHeight>
grid_distance_field(const GridWorld& world, GridCell goal) {
    std::array<std::array<int, GridWorld::kWidth>, GridWorld::kHeight> dist{};
    for (auto& row : dist) row.fill(-1);
    if (!world.is_free(goal)) throw std::invalid_argument("goal is not a free cell");
    std::deque<GridCell> frontier{goal};
    dist[goal.y][goal.x] = 0;
    while (!frontier.empty()) {
        GridCell c = frontier.front();
        frontier.pop_front();
        for (int d = 0; d < 4; ++d) {
            GridCell n{c.x + kDx[d], c.y + kDy[d]};
            if (world.is_free(n) && dist[n.y][n.x] < 0) {
                dist[n.y][n.x] = dist[c.y][c.x] + 1;
                frontier.push_back(n);
            }
        }
    }
    return dist;
}

Trajectory expert_grid_from(const GridWorld& world, const TaskVariable& task, GridCell start) {
    task.validate();
    const int ti = task.index();
    if (ti >= world.num_tasks()) throw std::invalid_argument("task has no goal in this world");
    const GridCell goal = world.goals()[ti];
    auto dist = grid_distance_field(world, goal);
    if (!world.is_free(start) || dist[start.y][start.x] < 0)
        throw std::invalid_argument("expert start cell cannot reach the goal");

    Trajectory traj;
    traj.task = task;
    GridCell cur = start;
    while (!(cur == goal)) {
        int chosen = -1;
        for (int d = 0; d < 4; ++d) {
            GridCell n = grid_step(world, cur, d);
            if (!(n == cur) && dist[n.y][n.x] == dist[cur.y][cur.x] - 1) {
                chosen = d;
                break;
            }
        }
        if (chosen < 0) throw std::logic_error("BFS field has no descending neighbor");
        GridCell next = grid_step(world, cur, chosen);
        traj.steps.push_back({{double(cur.x), double(cur.y)},
                              action_onehot(chosen),
                              {double(next.x), double(next.y)}});
        cur = next;
    }
    traj.terminal = true;
    traj.validate();
    return traj;
}

std::vector<Trajectory> expert_grid(const GridWorld& world, const TaskVariable& task,
                                    int n, std::uint64_t rng_seed) {
    if (n < 0) throw std::invalid_argument("expert trajectory count must be >= 0");
    const int ti = task.index();
    if (ti >= world.num_tasks()) throw std::invalid_argument("task has no goal in this world");
    const GridCell goal = world.goals()[ti];

    std::vector<GridCell> starts;
    for (GridCell c : world.free_cells())
        if (!(c == goal)) starts.push_back(c);

    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    std::vector<Trajectory> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(expert_grid_from(world, task, starts[pick(rng)]));
    return out;
}

} // namespace sgail
