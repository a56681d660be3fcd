"""Deterministic fixed-timestep simulation loop.

Each control tick works on a frozen snapshot of every agent: all
observations and all new references are computed from the same snapshot
and only then committed, so results cannot depend on the order agents
are processed in (or on how many workers process them). Physics substeps
with per-agent wind run between control ticks. Every random draw comes
from a stream derived from (master seed, agent id, purpose), which makes
runs bit-reproducible for a given configuration and seed.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .controller import (
    FlockingParams,
    MotionCommand,
    ProximalVector,
    ReferenceState,
    advance_reference,
    motion_command,
    proximal_vector,
)
from .geometry import Vec3
from .metrics import MetricSeries, cohesion_stats, order_metric
from .plant import AgentState, PlantParams, make_agent, track_step
from .sensing import SensorConfig, observe_neighbors
from .world import World, WindProcess, boundary_breached, height_agl

logger = logging.getLogger(__name__)

SPAWN_LAYOUTS = ("grid", "line")

# Purpose tags for per-agent random streams: a new purpose gets a new tag,
# never a reordering of draws in an existing stream.
_TAG_SENSOR = 1
_TAG_WIND = 2
_TAG_SPAWN = 3

AGENT_COLUMNS = (
    "t", "id", "x", "y", "z", "eta",
    "u", "v", "omega", "p_x", "p_y", "p_z", "m_p",
)
METRIC_COLUMNS = ("t", "order", "min_pairwise_dist", "mean_nn_dist")

TERMINATION_COMPLETED = "completed"
TERMINATION_COLLISION = "collision"
TERMINATION_BOUNDARY = "boundary"


@dataclass(frozen=True, slots=True)
class SpawnSpec:
    layout: str = "grid"
    spacing: float = 6.0
    altitude: float = 4.0
    heading: float = 0.0
    jitter: float = 0.1  # rad, uniform half-width added to heading

    def __post_init__(self) -> None:
        if self.layout not in SPAWN_LAYOUTS:
            raise ValueError(f"spawn layout must be one of {SPAWN_LAYOUTS}, got {self.layout!r}")
        if self.spacing <= 0.0:
            raise ValueError(f"spawn spacing must be > 0, got {self.spacing}")
        if self.jitter < 0.0:
            raise ValueError(f"spawn jitter must be >= 0, got {self.jitter}")


@dataclass(frozen=True, slots=True)
class SimConfig:
    n_agents: int = 9
    duration: float = 160.0
    control_rate: float = 10.0
    physics_rate: float = 20.0
    seed: int = 1
    hover_duration: float = 10.0
    d_collision: float = 1.0
    spawn: SpawnSpec = field(default_factory=SpawnSpec)

    def __post_init__(self) -> None:
        if self.n_agents < 1:
            raise ValueError(f"n_agents must be >= 1, got {self.n_agents}")
        if self.duration <= 0.0:
            raise ValueError(f"duration must be > 0, got {self.duration}")
        if self.control_rate <= 0.0 or self.physics_rate <= 0.0:
            raise ValueError("rates must be > 0")
        if self.physics_rate < self.control_rate:
            raise ValueError(
                f"physics_rate ({self.physics_rate}) must be >= control_rate "
                f"({self.control_rate})"
            )
        substeps = self.physics_rate / self.control_rate
        if abs(substeps - round(substeps)) > 1e-9:
            raise ValueError("physics_rate must be an integer multiple of control_rate")
        if self.hover_duration < 0.0:
            raise ValueError(f"hover_duration must be >= 0, got {self.hover_duration}")
        if self.d_collision < 0.0:
            raise ValueError(f"d_collision must be >= 0, got {self.d_collision}")


@dataclass(slots=True)
class RunLog:
    """Telemetry of one run: per-tick agent rows and per-tick metric rows."""

    agent_rows: list[tuple] = field(default_factory=list)
    metrics: MetricSeries = field(default_factory=MetricSeries)
    termination: str = TERMINATION_COMPLETED

    def min_pairwise_distance(self) -> float:
        vals = [d for d in self.metrics.min_pairwise_dist if not math.isnan(d)]
        return min(vals) if vals else math.nan

    def write_agents_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(AGENT_COLUMNS)
            w.writerows(self.agent_rows)

    def write_metrics_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(METRIC_COLUMNS)
            m = self.metrics
            w.writerows(zip(m.t, m.order, m.min_pairwise_dist, m.mean_nn_dist))


def _stream(seed: int, spawn_key: tuple) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn_key))


def spawn_flock(spec: SpawnSpec, n_agents: int, rng: np.random.Generator) -> list[AgentState]:
    """Place agents on a centered grid or line with jittered headings."""
    jitter = rng.uniform(-spec.jitter, spec.jitter, n_agents) if spec.jitter > 0.0 \
        else np.zeros(n_agents)
    agents = []
    if spec.layout == "grid":
        cols = math.ceil(math.sqrt(n_agents))
        rows = math.ceil(n_agents / cols)
        for k in range(n_agents):
            r, c = divmod(k, cols)
            pos = Vec3(
                (c - (cols - 1) / 2.0) * spec.spacing,
                ((rows - 1) / 2.0 - r) * spec.spacing,
                spec.altitude,
            )
            agents.append(make_agent(k, pos, spec.heading + float(jitter[k])))
    else:  # line abreast along Y
        for k in range(n_agents):
            pos = Vec3(0.0, (k - (n_agents - 1) / 2.0) * spec.spacing, spec.altitude)
            agents.append(make_agent(k, pos, spec.heading + float(jitter[k])))
    return agents


def compute_references(
    agents: Sequence[AgentState],
    flock: FlockingParams,
    sensor: SensorConfig,
    streams: dict[int, np.random.Generator],
    executor: ThreadPoolExecutor | None = None,
) -> dict[int, tuple[ReferenceState, ProximalVector, MotionCommand]]:
    """Control phase of one tick, from a frozen snapshot of all agents.

    Returns the new reference plus the force vector and command per agent
    id. Each agent reads only the snapshot and its own random stream, so the
    result is independent of iteration order and of the executor used.
    """
    alive = [a for a in agents if a.alive]

    def one(focal: AgentState):
        others = [o for o in alive if o.id != focal.id]
        obs = observe_neighbors(focal, others, sensor, streams[focal.id])
        p = proximal_vector(obs, flock)
        cmd = motion_command(p, flock)
        ref = advance_reference(focal.ref, cmd, focal.z_agl, flock.planar_alt, flock)
        return focal.id, (ref, p, cmd)

    if executor is None:
        results = [one(a) for a in alive]
    else:
        results = list(executor.map(one, alive))
    return dict(results)


_ZERO_P = ProximalVector(0.0, 0.0, 0.0, 0)
_ZERO_CMD = MotionCommand(0.0, 0.0, 0.0)


def run(
    sim: SimConfig,
    flock: FlockingParams,
    sensor: SensorConfig,
    plant: PlantParams,
    world: World,
    workers: int = 1,
) -> RunLog:
    """Execute one simulation and return its telemetry.

    Phase one holds the spawn references for ``sim.hover_duration`` seconds;
    phase two runs the flocking controller. The run ends at ``sim.duration``,
    or early when any agent reaches the arena border or any pair closes
    below ``sim.d_collision``.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if abs(1.0 / plant.dt - sim.physics_rate) > 1e-6:
        raise ValueError(
            f"plant.dt={plant.dt} does not match physics_rate={sim.physics_rate}"
        )

    agents = spawn_flock(sim.spawn, sim.n_agents, _stream(sim.seed, (_TAG_SPAWN,)))
    sensor_streams = {
        a.id: _stream(sim.seed, (a.id, _TAG_SENSOR)) for a in agents
    }
    wind_procs = {
        a.id: WindProcess(world.wind, _stream(sim.seed + world.wind.seed, (a.id, _TAG_WIND)))
        for a in agents
    }

    dt_c = 1.0 / sim.control_rate
    substeps = round(sim.physics_rate / sim.control_rate)
    dt_p = dt_c / substeps
    n_ticks = round(sim.duration * sim.control_rate)

    log = RunLog()
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in range(n_ticks + 1):
            t = k * dt_c
            for a in agents:
                a.z_agl = height_agl(world.terrain, a.pos)
                if a.alive and a.z_agl < 0.0:
                    logger.warning("agent %d hit the ground at t=%.1f s", a.id, t)
                    a.alive = False

            alive = [a for a in agents if a.alive]
            order = order_metric([a.heading for a in alive]) if alive else math.nan
            if len(alive) >= 2:
                min_d, mean_nn = cohesion_stats([a.pos for a in alive])
            else:
                min_d, mean_nn = math.nan, math.nan
            log.metrics.append(t, order, min_d, mean_nn)

            flocking = t >= sim.hover_duration and k < n_ticks
            if flocking:
                new_refs = compute_references(agents, flock, sensor, sensor_streams, executor)
            else:
                new_refs = {}

            for a in agents:
                _, p, cmd = new_refs.get(a.id, (None, _ZERO_P, _ZERO_CMD))
                log.agent_rows.append((
                    t, a.id, a.pos.x, a.pos.y, a.pos.z, a.heading,
                    cmd.u, cmd.v, cmd.omega, p.p_x, p.p_y, p.p_z, p.m_p,
                ))

            if not math.isnan(min_d) and min_d < sim.d_collision:
                log.termination = TERMINATION_COLLISION
                logger.info("collision at t=%.1f s (min distance %.2f m)", t, min_d)
                break
            if boundary_breached(world.arena, agents):
                log.termination = TERMINATION_BOUNDARY
                logger.info("arena border reached at t=%.1f s", t)
                break
            if k == n_ticks:
                break

            for a in agents:
                if a.id in new_refs:
                    a.ref = new_refs[a.id][0]
            for _ in range(substeps):
                for i, a in enumerate(agents):
                    agents[i] = track_step(a, plant, wind_procs[a.id].sample(dt_p))
    finally:
        if executor is not None:
            executor.shutdown()

    return log
