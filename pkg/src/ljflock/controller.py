"""Proximal-only flocking controller.

Aggregates neighbor observations into a body-frame force vector, converts
it to forward / turn / vertical commands, and advances the position and
heading reference that the tracking plant follows. There is no alignment
term and no goal term: cohesion and common travel direction both emerge
from the distance-dependent force alone, helped by the non-holonomic
command structure (forward speed from the longitudinal projection, turn
rate from the lateral one).

All commands are per control tick: a FlockingParams.b_s of 0.03 means the
reference advances 0.03 m each tick an isolated robot. The config layer
converts a m/s bias to per-tick units using the control rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .geometry import UnitQuat, heading_of, heading_to_quat, slerp_step, wrap_angle
from .potential import PotentialParams, clamp_magnitude, lj_magnitude
from .sensing import NeighborObservation

MODES = ("planar", "full_3d")


@dataclass(frozen=True, slots=True)
class FlockingParams:
    """Gains and limits of the flocking law.

    kappa1/2/3 scale the longitudinal, lateral, and vertical force
    projections; b_s is the forward bias per control tick; gamma is the
    heading smoothing coefficient (1 = frozen heading, 0 = no smoothing);
    h_limit is the minimum allowed height above ground.
    """

    kappa1: float = 0.5
    kappa2: float = 0.2
    kappa3: float = 0.1
    b_s: float = 0.03
    gamma: float = 0.95
    h_limit: float = 2.0
    mode: str = "full_3d"
    planar_alt: float = 4.0
    p_max: float = 2.0
    potential: PotentialParams = field(default_factory=PotentialParams)

    def __post_init__(self) -> None:
        for name in ("kappa1", "kappa2", "kappa3"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.b_s < 0.0:
            raise ValueError(f"b_s must be >= 0, got {self.b_s}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.h_limit < 0.0:
            raise ValueError(f"h_limit must be >= 0, got {self.h_limit}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True, slots=True)
class ProximalVector:
    """Body-frame force projections and the neighbor count behind them."""

    p_x: float
    p_y: float
    p_z: float
    m_p: int


@dataclass(frozen=True, slots=True)
class MotionCommand:
    u: float      # forward, m/tick
    v: float      # turn, rad/tick
    omega: float  # vertical, m/tick


@dataclass(frozen=True, slots=True)
class ReferenceState:
    """Desired pose fed to the tracker: position, heading, smoothed quaternion."""

    x_d: float
    y_d: float
    z_d: float
    eta_d: float
    q_s: UnitQuat


def initial_reference(x: float, y: float, z: float, eta: float) -> ReferenceState:
    """Reference seeded at a spawn pose."""
    return ReferenceState(x, y, z, wrap_angle(eta), heading_to_quat(eta))


def proximal_vector(obs: Sequence[NeighborObservation], params: FlockingParams) -> ProximalVector:
    """Sum the clamped force magnitudes projected on the body axes.

    Observations flagged planar (z_r_zero) contribute nothing vertically.
    """
    p_x = 0.0
    p_y = 0.0
    p_z = 0.0
    for o in obs:
        p_n = clamp_magnitude(lj_magnitude(o.d_n, params.potential), params.p_max)
        sin_t = math.sin(o.theta_n)
        p_x += p_n * sin_t * math.cos(o.phi_n)
        p_y += p_n * sin_t * math.sin(o.phi_n)
        if not o.z_r_zero:
            p_z += p_n * math.cos(o.theta_n)
    return ProximalVector(p_x, p_y, p_z, len(obs))


def motion_command(p: ProximalVector, params: FlockingParams) -> MotionCommand:
    """Gains plus the forward bias turn the projections into a command."""
    return MotionCommand(
        u=params.kappa1 * p.p_x + params.b_s,
        v=params.kappa2 * p.p_y,
        omega=params.kappa3 * p.p_z,
    )


def advance_reference(ref: ReferenceState, cmd: MotionCommand, z_f: float,
                      planar_alt: float, params: FlockingParams) -> ReferenceState:
    """One reference update from a motion command.

    The horizontal reference advances by ``u`` along the current reference
    heading. Vertically, ``h_push`` restores any deficit below ``h_limit``
    (z_f is the measured height above ground), and a downward ``omega`` that
    would land below the limit is suppressed. Planar mode pins the height
    reference to the shared flock altitude instead. The heading reference
    turns by ``v`` and is then smoothed by quaternion interpolation.
    """
    x_d = ref.x_d + math.cos(ref.eta_d) * cmd.u
    y_d = ref.y_d + math.sin(ref.eta_d) * cmd.u

    h_push = max(0.0, params.h_limit - z_f)
    if (z_f + h_push + cmd.omega) <= params.h_limit:
        h_d = ref.z_d + h_push
    else:
        h_d = ref.z_d + h_push + cmd.omega
    z_d = planar_alt if params.mode == "planar" else h_d

    eta_des = ref.eta_d + cmd.v
    q_s = slerp_step(ref.q_s, heading_to_quat(eta_des), params.gamma)
    return ReferenceState(x_d, y_d, z_d, heading_of(q_s), q_s)


def controller_step(focal, obs: Sequence[NeighborObservation],
                    params: FlockingParams) -> ReferenceState:
    """Full pipeline for one robot and one control tick.

    ``focal`` needs ``ref`` (ReferenceState) and ``z_agl`` (the current
    height-above-ground measurement). Pure: the new reference depends only
    on the arguments. An isolated robot (no observations) still advances by
    the forward bias along its current reference heading.
    """
    p = proximal_vector(obs, params)
    cmd = motion_command(p, params)
    return advance_reference(focal.ref, cmd, focal.z_agl, params.planar_alt, params)


def with_reference(focal, ref: ReferenceState):
    """Copy of an agent state with a new reference (two-phase commit helper)."""
    return replace(focal, ref=ref)
