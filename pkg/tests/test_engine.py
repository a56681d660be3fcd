import math
import random

import numpy as np
import pytest

from ljflock.config import parse_config
from ljflock.engine import (
    SimConfig,
    SpawnSpec,
    compute_references,
    run,
    spawn_flock,
)
from ljflock.metrics import order_metric
from ljflock.sensing import SensorConfig


def rng(seed=0):
    return np.random.default_rng(seed)


NOISELESS = """
[sensor]
gnss_noise_std = 0.0
[wind]
gust_std = 0.0
"""


def setup_from(text, seed=1):
    return parse_config(text, seed_override=seed)


def test_spawn_grid_nearest_neighbor_spacing():
    agents = spawn_flock(SpawnSpec(layout="grid", spacing=6.0, jitter=0.0), 9, rng())
    assert len(agents) == 9
    for a in agents:
        dists = sorted(
            (a.pos - b.pos).norm() for b in agents if b.id != a.id
        )
        assert dists[0] == pytest.approx(6.0, abs=1e-12)


def test_spawn_line_spacing():
    agents = spawn_flock(SpawnSpec(layout="line", spacing=6.0, jitter=0.0), 3, rng())
    ys = sorted(a.pos.y for a in agents)
    assert ys == [-6.0, 0.0, 6.0]


def test_spawn_without_jitter_is_perfectly_ordered():
    agents = spawn_flock(SpawnSpec(jitter=0.0), 9, rng())
    assert order_metric([a.heading for a in agents]) == pytest.approx(1.0, abs=1e-12)


def test_spawn_jitter_keeps_high_initial_order():
    for seed in range(20):
        agents = spawn_flock(SpawnSpec(jitter=0.3), 9, rng(seed))
        assert 0.85 < order_metric([a.heading for a in agents]) <= 1.0


def test_spawn_ids_are_sequential():
    agents = spawn_flock(SpawnSpec(), 5, rng())
    assert [a.id for a in agents] == [0, 1, 2, 3, 4]


def test_single_agent_flies_straight():
    s = setup_from(NOISELESS + "[sim]\nn_agents = 1\nduration = 60.0\nspawn_jitter = 0.0\n")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    assert log.termination == "completed"
    assert all(o == pytest.approx(1.0, abs=1e-12) for o in log.metrics.order)
    final = log.agent_rows[-1]
    # 50 s of flocking at 0.3 m/s, minus the tracking lag
    assert 13.0 < final[2] < 15.1
    assert abs(final[3]) < 1e-9


def test_two_agents_at_equilibrium_hold_separation():
    s = setup_from(NOISELESS + """
[sim]
n_agents = 2
spawn_layout = line
spawn_jitter = 0.0
duration = 160.0
""")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    assert log.termination == "completed"
    for d in log.metrics.min_pairwise_dist:
        assert d == pytest.approx(6.0, abs=0.1)


def test_hover_phase_holds_spawn_pose():
    s = setup_from(NOISELESS + "[sim]\nduration = 30.0\n")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    first_tick = {row[1]: row for row in log.agent_rows if row[0] == 0.0}
    for row in log.agent_rows:
        t = row[0]
        if t < s.sim.hover_duration:
            start = first_tick[row[1]]
            assert row[2] == start[2] and row[3] == start[3] and row[4] == start[4]
            assert row[6] == 0.0 and row[7] == 0.0 and row[8] == 0.0


def test_same_seed_reproduces_log(tmp_path):
    cfg = "[sim]\nduration = 30.0\n"

    def one():
        s = setup_from(cfg, seed=5)
        log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
        a = tmp_path / "a.csv"
        m = tmp_path / "m.csv"
        log.write_agents_csv(a)
        log.write_metrics_csv(m)
        return a.read_bytes(), m.read_bytes()

    assert one() == one()


def test_worker_count_does_not_change_results(tmp_path):
    cfg = "[sim]\nduration = 30.0\n"

    def one(workers):
        s = setup_from(cfg, seed=5)
        log = run(s.sim, s.flock, s.sensor, s.plant, s.world, workers=workers)
        a = tmp_path / f"a{workers}.csv"
        log.write_agents_csv(a)
        return a.read_bytes()

    assert one(1) == one(4)


def test_snapshot_commit_is_order_independent():
    s = setup_from("")
    agents = spawn_flock(s.sim.spawn, 9, rng(3))
    for a in agents:
        a.z_agl = a.pos.z
    sensor = SensorConfig(backend="direct_exchange", gnss_noise_std=1.5)

    def refs_with_order(order_seed):
        shuffled = list(agents)
        random.Random(order_seed).shuffle(shuffled)
        streams = {a.id: rng(100 + a.id) for a in agents}
        return compute_references(shuffled, s.flock, sensor, streams)

    base = refs_with_order(0)
    for order_seed in (1, 2, 3):
        other = refs_with_order(order_seed)
        assert set(other) == set(base)
        for aid in base:
            assert other[aid] == base[aid]


def test_boundary_termination_in_small_arena():
    s = setup_from(NOISELESS + """
[sim]
n_agents = 4
duration = 120.0
[arena]
x_min = -5.0
x_max = 5.0
y_min = -5.0
y_max = 5.0
""")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    assert log.termination == "boundary"
    assert log.metrics.t[-1] < 60.0


def test_collision_termination():
    s = setup_from(NOISELESS + """
[sim]
n_agents = 2
spawn_layout = line
spawn_spacing = 0.9
""")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    assert log.termination == "collision"
    assert log.metrics.t[-1] == 0.0


def test_metric_rows_cover_full_duration():
    s = setup_from(NOISELESS + "[sim]\nduration = 20.0\n")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    assert log.metrics.t[0] == 0.0
    assert log.metrics.t[-1] == pytest.approx(20.0)
    assert len(log.metrics.t) == 201
    assert len(log.agent_rows) == 201 * 9


def test_agent_rows_schema():
    s = setup_from(NOISELESS + "[sim]\nduration = 12.0\n")
    log = run(s.sim, s.flock, s.sensor, s.plant, s.world)
    row = log.agent_rows[-1]
    assert len(row) == 13
    assert isinstance(row[1], int)
    assert isinstance(row[12], int)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(n_agents=0)
    with pytest.raises(ValueError):
        SimConfig(control_rate=20.0, physics_rate=10.0)
    with pytest.raises(ValueError):
        SimConfig(control_rate=10.0, physics_rate=15.0)  # not an integer multiple
    with pytest.raises(ValueError):
        SpawnSpec(layout="circle")
