"""Python smoke tests for the native module.

Runs standalone (python test_smoke.py) or under pytest.
"""

import math
import os
import sys
import tempfile


def test_approximator_roundtrip():
    import sgail

    spec = sgail.ApproximatorSpec(5, [64, 64], 4)
    assert spec.param_count() == 4804
    a = sgail.Approximator(spec, seed=7)
    b = sgail.Approximator(spec, seed=7)
    assert a.get_params() == b.get_params()

    out = a.forward([0.1, 0.2, 0.3, 0.4, 0.5])
    assert len(out) == 4
    a.set_params(a.get_params())
    assert a.forward([0.1, 0.2, 0.3, 0.4, 0.5]) == out

    grad = a.backward([([0.1, 0.2, 0.3, 0.4, 0.5], [1.0, 0.0, 0.0, 0.0])])
    assert len(grad) == spec.param_count()
    assert any(g != 0.0 for g in grad)


def test_grid_world():
    import sgail

    world = sgail.GridWorld.default_world()
    assert world.goal(0) == (0, 0)
    assert world.goal(1) == (10, 10)
    assert world.is_puddle(5, 5)
    assert sgail.grid_step(world, (0, 3), 2) == (0, 3)  # blocked at the wall
    assert sgail.grid_step(world, (2, 3), 0) == (3, 3)

    length, path = sgail.bfs_shortest_path(world, (10, 0), (0, 0))
    assert length == 10
    assert path[0] == (10, 0) and path[-1] == (0, 0)


def test_reacher():
    import sgail

    world = sgail.ReacherWorld.make()
    state = sgail.reacher_state(0.0, 0.0)
    x, y = sgail.tip_position(world, state)
    assert abs(x - (world.l1 + world.l2)) < 1e-12 and abs(y) < 1e-12
    nxt = sgail.reacher_step(world, state, [0.5, -0.5])
    assert abs(nxt[0] ** 2 + nxt[1] ** 2 - 1.0) < 1e-12


def test_model_arithmetic():
    import sgail

    assert abs(sgail.airl_d(0.0, 0.0) - 0.5) < 1e-12
    # closed form f - (1 - beta) log pi
    f, lp, beta = 1.3, math.log(0.2), 0.9
    d = sgail.airl_d(f, lp)
    lhs = math.log(d) - math.log(1.0 - d) + beta * lp
    assert abs(lhs - sgail.pseudo_reward(f, lp, beta)) < 1e-9
    assert sgail.pseudo_reward(2.0, -5.0, 1.0) == 2.0
    assert abs(sgail.advantage(1.0, 0.25, 0.5, 0.95, False) - (1.0 + 0.95 * 0.5 - 0.25)) < 1e-12


def test_oracle():
    import sgail

    world = sgail.GridWorld.default_world()
    sol, cells = sgail.grid_soft_values(world, task=0)
    assert sol.residual <= 1e-10
    assert len(sol.v) == len(cells)

    mi = sgail.mutual_information_exact([[0.5, 0.0], [0.0, 0.5]])
    assert abs(mi - math.log(2.0)) < 1e-12

    sched = sgail.BetaSchedule("linear", 0.9, 0.6, 1000)
    assert abs(sgail.beta_at(sched, 500) - 0.75) < 1e-12


def test_train_smoke():
    import sgail

    config = "\n".join(
        [
            "variant = sgail-erc",
            "train.epochs = 3",
            "train.episodes_per_epoch = 4",
            "train.expert_per_task = 2",
            "train.eval_trials = 5",
            "train.eval_interval = 2",
            "net.hidden = 8",
        ]
    )
    records = sgail.train(config)
    assert len(records) >= 1
    assert records[0].epoch == 0
    assert len(records[0].success) == 2
    assert all(0 <= s <= 5 for r in records for s in r.success)
    # determinism contract
    again = sgail.train(config)
    assert [(r.epoch, r.success) for r in again] == [(r.epoch, r.success) for r in records]


def test_experiment_smoke():
    import sgail

    config = "\n".join(
        [
            "experiment = grid-erc",
            "train.epochs = 2",
            "train.episodes_per_epoch = 4",
            "train.expert_per_task = 2",
            "train.eval_trials = 4",
            "net.hidden = 8",
            "seeds = 0",
        ]
    )
    with tempfile.TemporaryDirectory() as out:
        files = sgail.run_experiment(config, out)
        assert any(f.endswith("metrics.csv") for f in files)
        assert any(f.endswith("summary.csv") for f in files)
        for f in files:
            assert os.path.exists(os.path.join(out, f))


def main():
    tests = [
        test_approximator_roundtrip,
        test_grid_world,
        test_reacher,
        test_model_arithmetic,
        test_oracle,
        test_train_smoke,
        test_experiment_smoke,
    ]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
