#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgail/trajectory.hpp"

namespace sgail {

struct GridCell {
    int x = 0;
    int y = 0;
    bool operator==(const GridCell&) const = default;
};

/// Movement directions in fixed priority order (also the one-hot layout).
enum GridDirection { kRight = 0, kUp = 1, kLeft = 2, kDown = 3 };

/// 11x11 puddle grid. Immutable after construction; construction verifies
/// that every free cell can reach every goal.
class GridWorld {
  public:
    static constexpr int kWidth = 11;
    static constexpr int kHeight = 11;

    /// Parses a layout: one text row per line, top line is y = height-1.
    /// '.' free, '#' puddle, digits '1'..'9' mark per-task goals.
    static GridWorld from_layout(const std::string& text, int horizon = 60);
    /// The shipped default: a 3x3 puddle block centered on the grid, goals
    /// at (0,0) and (10,10).
    static GridWorld default_world(int horizon = 60);
    static const std::string& default_layout_text();

    bool in_bounds(GridCell c) const;
    bool is_puddle(GridCell c) const;
    bool is_free(GridCell c) const { return in_bounds(c) && !is_puddle(c); }

    const std::vector<GridCell>& goals() const { return goals_; }
    int num_tasks() const { return static_cast<int>(goals_.size()); }
    int horizon() const { return horizon_; }

    /// All free cells in a fixed scan order (y-major, then x).
    std::vector<GridCell> free_cells() const;
    std::string to_layout() const;

  private:
    GridWorld() = default;
    void check_connectivity() const;

    std::array<std::array<bool, kWidth>, kHeight> puddle_{};
    std::vector<GridCell> goals_;
    int horizon_ = 60;
};

/// Deterministic transition: moves one cell in the action's direction;
/// blocked moves (off-grid or into a puddle) leave the agent in place.
GridCell grid_step(const GridWorld& world, GridCell s, int direction);
GridCell grid_step(const GridWorld& world, GridCell s, std::span<const double> action_onehot);

/// Decodes a one-hot action vector; throws on malformed input.
int action_index(std::span<const double> onehot);
std::vector<double> action_onehot(int direction, int dim = 4);

/// BFS distance from every free cell to `goal` (-1 where unreachable).
std::array<std::array<int, GridWorld::kWidth>, GridWorld::kHeight>
grid_distance_field(const GridWorld& world, GridCell goal);

/// Scripted expert: n shortest-path episodes from uniformly sampled free
/// non-goal start cells; ties broken by the fixed direction priority.
std::vector<Trajectory> expert_grid(const GridWorld& world, const TaskVariable& task,
                                    int n, std::uint64_t rng_seed);

/// Single shortest-path episode from an explicit start cell.
Trajectory expert_grid_from(const GridWorld& world, const TaskVariable& task, GridCell start);

} // namespace sgail
