#pragma once

#include <span>
#include <vector>

namespace sgail {

/// One-hot task selector of length K (default K = 3; slots beyond the active
/// task count stay cold).
struct TaskVariable {
    std::vector<double> onehot;

    static TaskVariable make(int index, int dim = 3);
    /// Index of the hot entry; throws if the vector is not exactly one-hot.
    int index() const;
    void validate() const;
};

struct Step {
    std::vector<double> state;
    std::vector<double> action;
    std::vector<double> next_state;
};

/// One episode: chronologically ordered transitions plus the task it was
/// collected under. `terminal` is true when the episode ended by reaching the
/// task's goal condition (rather than the horizon).
struct Trajectory {
    TaskVariable task;
    std::vector<Step> steps;
    bool terminal = false;

    /// Checks the chaining invariant: next_state of step t == state of t+1.
    void validate() const;
};

} // namespace sgail
