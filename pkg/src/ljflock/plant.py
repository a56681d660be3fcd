"""Kinematic reference tracker standing in for the full autopilot stack.

The real vehicle runs a trajectory tracker and attitude control loops
that make it behave like a smooth follower of the supplied position and
heading reference. Here that whole stack collapses to a first-order lag
per axis with a speed saturation, which keeps the flocking-relevant
behavior (bounded velocity, lag, no overshoot) without simulating
rotor-level dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Vec3, ZERO3, wrap_angle
from .controller import ReferenceState, initial_reference


@dataclass(frozen=True, slots=True)
class PlantParams:
    tau_xy: float = 0.8    # s, horizontal position lag
    tau_z: float = 1.2     # s, vertical position lag
    tau_eta: float = 0.5   # s, heading lag
    v_max: float = 4.0     # m/s speed saturation
    dt: float = 0.05       # s, physics step

    def __post_init__(self) -> None:
        for name in ("tau_xy", "tau_z", "tau_eta", "v_max", "dt"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.dt > min(self.tau_xy, self.tau_z, self.tau_eta) / 2.0:
            raise ValueError(
                f"dt={self.dt} too large for time constants "
                f"(need dt <= min(tau)/2)"
            )


@dataclass(slots=True)
class AgentState:
    """One UAV: true pose, its current reference, and bookkeeping.

    ``z_agl`` caches the latest downward-lidar height-above-ground
    measurement; the engine refreshes it every control tick. A dead agent
    (crashed into terrain) is frozen in place.
    """

    id: int
    pos: Vec3
    heading: float
    ref: ReferenceState
    vel: Vec3 = ZERO3
    alive: bool = True
    z_agl: float = 0.0


def make_agent(agent_id: int, pos: Vec3, heading: float) -> AgentState:
    """Agent at a spawn pose with its reference seeded there."""
    eta = wrap_angle(heading)
    return AgentState(
        id=agent_id,
        pos=pos,
        heading=eta,
        ref=initial_reference(pos.x, pos.y, pos.z, eta),
        z_agl=pos.z,
    )


def track_step(state: AgentState, params: PlantParams, wind: Vec3 = ZERO3) -> AgentState:
    """Advance the pose one physics step toward the reference.

    First-order pull toward the reference per axis, commanded velocity
    clamped to ``v_max``; wind is an external drift added on top of the
    saturated command. Heading follows its own lag and takes the short way
    around +-pi. Dead agents do not move.
    """
    if not state.alive:
        return state
    ref = state.ref
    vx = (ref.x_d - state.pos.x) / params.tau_xy
    vy = (ref.y_d - state.pos.y) / params.tau_xy
    vz = (ref.z_d - state.pos.z) / params.tau_z
    speed = math.sqrt(vx * vx + vy * vy + vz * vz)
    if speed > params.v_max:
        k = params.v_max / speed
        vx *= k
        vy *= k
        vz *= k
    pos = Vec3(
        state.pos.x + (vx + wind.x) * params.dt,
        state.pos.y + (vy + wind.y) * params.dt,
        state.pos.z + (vz + wind.z) * params.dt,
    )
    eta = wrap_angle(
        state.heading + wrap_angle(ref.eta_d - state.heading) * (params.dt / params.tau_eta)
    )
    return AgentState(
        id=state.id,
        pos=pos,
        heading=eta,
        ref=ref,
        vel=Vec3(vx + wind.x, vy + wind.y, vz + wind.z),
        alive=True,
        z_agl=state.z_agl,
    )
