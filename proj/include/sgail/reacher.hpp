#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sgail/trajectory.hpp"

namespace sgail {

/// Two-link planar arm with gravity-free damped double-integrator joints.
/// State vector: (sin t1, cos t1, sin t2, cos t2, dt1, dt2); t2 is the elbow
/// angle relative to link 1.
struct ReacherWorld {
    double l1 = 0.1;
    double l2 = 0.1;
    double dt = 0.02;
    double damping = 0.1;
    double torque_limit = 1.0;
    double success_radius = 0.0; // 0 -> default 0.05 * (l1 + l2)
    int horizon = 400;
    std::vector<std::array<double, 2>> targets; // per task; empty -> defaults

    /// Fills defaulted fields and checks invariants (targets reachable,
    /// dt > 0, positive lengths).
    static ReacherWorld make(ReacherWorld base);
    static ReacherWorld make();

    int num_tasks() const { return static_cast<int>(targets.size()); }
    double reach() const { return l1 + l2; }
};

std::vector<double> reacher_state(double theta1, double theta2, double vel1 = 0.0,
                                  double vel2 = 0.0);

/// Semi-implicit Euler step; torques are clamped to the limit first.
std::vector<double> reacher_step(const ReacherWorld& world, std::span<const double> state,
                                 std::span<const double> torque);

/// Forward kinematics of the arm tip.
std::array<double, 2> tip_position(const ReacherWorld& world, std::span<const double> state);

/// Scripted expert: resolved-rate proportional control of the tip along the
/// straight segment to the task target. Throws if the controller misses the
/// target within the horizon (a sign of a bad world config).
std::vector<Trajectory> expert_reacher(const ReacherWorld& world, const TaskVariable& task,
                                       int n, std::uint64_t rng_seed);

Trajectory expert_reacher_from(const ReacherWorld& world, const TaskVariable& task,
                               std::span<const double> start);

} // namespace sgail
