#include "sgail/reacher.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sgail {

ReacherWorld ReacherWorld::make() { return make(ReacherWorld{}); }

ReacherWorld ReacherWorld::make(ReacherWorld base) {
    ReacherWorld w = base;
    if (w.l1 <= 0.0 || w.l2 <= 0.0) throw std::invalid_argument("reacher link lengths must be positive");
    if (w.dt <= 0.0) throw std::invalid_argument("reacher dt must be positive");
    if (w.torque_limit <= 0.0) throw std::invalid_argument("reacher torque limit must be positive");
    if (w.horizon < 0) throw std::invalid_argument("reacher horizon must be >= 0");
    if (w.success_radius <= 0.0) w.success_radius = 0.05 * w.reach();
    if (w.targets.empty()) {
        const double r = 0.7 * w.reach();
        w.targets = {{r, r}, {-r, -r}};
    }
    for (const auto& t : w.targets) {
        const double d = std::hypot(t[0], t[1]);
        if (d > w.reach())
            throw std::invalid_argument("reacher target outside the reachable workspace");
    }
    return w;
}

std::vector<double> reacher_state(double theta1, double theta2, double vel1, double vel2) {
    return {std::sin(theta1), std::cos(theta1), std::sin(theta2), std::cos(theta2), vel1, vel2};
}

static void check_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string("non-finite ") + what);
}

std::vector<double> reacher_step(const ReacherWorld& world, std::span<const double> state,
                                 std::span<const double> torque) {
    if (state.size() != 6) throw std::invalid_argument("reacher state must have 6 entries");
    if (torque.size() != 2) throw std::invalid_argument("reacher torque must have 2 entries");
    check_finite(state, "reacher state");
    check_finite(torque, "reacher torque");

    double theta[2] = {std::atan2(state[0], state[1]), std::atan2(state[2], state[3])};
    double vel[2] = {state[4], state[5]};
    for (int i = 0; i < 2; ++i) {
        const double tau = std::clamp(torque[i], -world.torque_limit, world.torque_limit);
        vel[i] = (1.0 - world.damping * world.dt) * vel[i] + world.dt * tau;
        theta[i] += world.dt * vel[i];
    }
    return reacher_state(theta[0], theta[1], vel[0], vel[1]);
}

std::array<double, 2> tip_position(const ReacherWorld& world, std::span<const double> state) {
    if (state.size() != 6) throw std::invalid_argument("reacher state must have 6 entries");
    const double t1 = std::atan2(state[0], state[1]);
    const double t2 = std::atan2(state[2], state[3]);
    return {world.l1 * std::cos(t1) + world.l2 * std::cos(t1 + t2),
            world.l1 * std::sin(t1) + world.l2 * std::sin(t1 + t2)};
}

namespace {

// Joint velocities realizing a desired tip velocity, through a damped
// least-squares inverse of the 2x2 tip Jacobian. Elbow motion is weighted
// down so pursuit sweeps the shoulder instead of folding through the
// near-singular workspace center.
std::array<double, 2> resolved_rate(const ReacherWorld& w, double t1, double t2,
                                    const std::array<double, 2>& tip_vel) {
    const double s1 = std::sin(t1), c1 = std::cos(t1);
    const double s12 = std::sin(t1 + t2), c12 = std::cos(t1 + t2);
    const double j11 = -w.l1 * s1 - w.l2 * s12, j12 = -w.l2 * s12;
    const double j21 = w.l1 * c1 + w.l2 * c12, j22 = w.l2 * c12;

    const double lambda = 0.05 * w.reach();
    const double inv_w2 = 0.25; // elbow weight 4x
    // A = J W^-1 J^T + lambda^2 I (2x2, symmetric)
    const double a11 = j11 * j11 + inv_w2 * j12 * j12 + lambda * lambda;
    const double a12 = j11 * j21 + inv_w2 * j12 * j22;
    const double a22 = j21 * j21 + inv_w2 * j22 * j22 + lambda * lambda;
    const double det = a11 * a22 - a12 * a12;
    const double u1 = (a22 * tip_vel[0] - a12 * tip_vel[1]) / det;
    const double u2 = (-a12 * tip_vel[0] + a11 * tip_vel[1]) / det;
    return {j11 * u1 + j21 * u2, inv_w2 * (j12 * u1 + j22 * u2)};
}

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

} // namespace

Trajectory expert_reacher_from(const ReacherWorld& world, const TaskVariable& task,
                               std::span<const double> start) {
    task.validate();
    const int ti = task.index();
    if (ti >= world.num_tasks()) throw std::invalid_argument("task has no target in this world");
    const auto& target = world.targets[ti];

    Trajectory traj;
    traj.task = task;
    std::vector<double> state(start.begin(), start.end());

    auto distance = [&](std::span<const double> s) {
        auto tip = tip_position(world, s);
        return std::hypot(target[0] - tip[0], target[1] - tip[1]);
    };
    if (distance(state) <= world.success_radius) {
        traj.terminal = true;
        return traj;
    }

    const double gain = 6.0;
    const double max_speed = 3.0 * world.reach();
    // Torque-limited joints accelerate slowly; cap the approach speed by the
    // distance still available for braking.
    const double brake = 0.9 * world.reach();
    const double target_angle = std::atan2(target[1], target[0]);
    for (int t = 0; t < world.horizon; ++t) {
        const auto tip = tip_position(world, state);
        const double ex = target[0] - tip[0], ey = target[1] - tip[1];
        const double dist = std::hypot(ex, ey);
        const double speed =
            std::min({gain * dist, max_speed, std::sqrt(2.0 * brake * dist)});

        // Pursue the straight segment; for far targets blend in a short-arc
        // tangential sweep so a diametric chord cannot stall at full
        // extension.
        double dx = ex / dist, dy = ey / dist;
        const double tip_angle = std::atan2(tip[1], tip[0]);
        const double dtheta = wrap_angle(target_angle - tip_angle);
        const double blend = std::min(1.0, std::abs(dtheta) / M_PI) * 0.8;
        const double sweep = dtheta >= 0.0 ? 1.0 : -1.0;
        const double tip_norm = std::hypot(tip[0], tip[1]);
        if (tip_norm > 1e-9 && blend > 0.0) {
            const double tx = -tip[1] / tip_norm * sweep, ty = tip[0] / tip_norm * sweep;
            dx = (1.0 - blend) * dx + blend * tx;
            dy = (1.0 - blend) * dy + blend * ty;
            const double n = std::hypot(dx, dy);
            dx /= n;
            dy /= n;
        }
        const std::array<double, 2> tip_vel = {dx * speed, dy * speed};

        const double t1 = std::atan2(state[0], state[1]);
        const double t2 = std::atan2(state[2], state[3]);
        auto qdot = resolved_rate(world, t1, t2, tip_vel);

        // Keep commanded joint speeds low enough that the torque-limited
        // joints can still stop within the remaining tip distance; the DLS
        // inverse would otherwise demand unkillable momentum near folds.
        const double accel = world.torque_limit; // unit inertia
        const double qcap =
            std::min(3.0, std::sqrt(1.6 * accel * dist / world.reach()));
        for (int i = 0; i < 2; ++i) qdot[i] = std::clamp(qdot[i], -qcap, qcap);

        // Torque that tracks the commanded joint velocity under the damped
        // integrator, clamped to the actuator limit.
        std::vector<double> torque(2);
        for (int i = 0; i < 2; ++i) {
            const double v = state[4 + i];
            torque[i] = std::clamp((qdot[i] - (1.0 - world.damping * world.dt) * v) / world.dt,
                                   -world.torque_limit, world.torque_limit);
        }
        auto next = reacher_step(world, state, torque);
        traj.steps.push_back({state, torque, next});
        state = std::move(next);
        if (distance(state) <= world.success_radius) {
            traj.terminal = true;
            traj.validate();
            return traj;
        }
    }
    throw std::runtime_error("reacher expert failed to reach the target within the horizon");
}

std::vector<Trajectory> expert_reacher(const ReacherWorld& world, const TaskVariable& task,
                                       int n, std::uint64_t rng_seed) {
    if (n < 0) throw std::invalid_argument("expert trajectory count must be >= 0");
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> theta1(-3.0, 1.3);
    std::vector<Trajectory> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        auto start = reacher_state(theta1(rng), 0.0);
        out.push_back(expert_reacher_from(world, task, start));
    }
    return out;
}

} // namespace sgail
