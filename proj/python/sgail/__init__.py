"""Multitask adversarial imitation learning lab (native core bindings)."""

from ._core import (
    Approximator,
    ApproximatorSpec,
    BetaSchedule,
    GridWorld,
    MetricsRecord,
    ReacherWorld,
    SoftSolution,
    advantage,
    airl_d,
    beta_at,
    bfs_shortest_path,
    grid_soft_values,
    grid_step,
    mutual_information_exact,
    pseudo_reward,
    reacher_state,
    reacher_step,
    run_experiment,
    tip_position,
    train,
)

__all__ = [
    "Approximator",
    "ApproximatorSpec",
    "BetaSchedule",
    "GridWorld",
    "MetricsRecord",
    "ReacherWorld",
    "SoftSolution",
    "advantage",
    "airl_d",
    "beta_at",
    "bfs_shortest_path",
    "grid_soft_values",
    "grid_step",
    "mutual_information_exact",
    "pseudo_reward",
    "reacher_state",
    "reacher_step",
    "run_experiment",
    "tip_position",
    "train",
]
