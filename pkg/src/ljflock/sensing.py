"""Per-robot neighbor observation under the two sensing backends.

``direct_exchange`` models GNSS positions shared over the swarm network:
each neighbor's world position is perturbed before being converted to
the focal body frame. ``relative_vision`` models an onboard camera-based
relative localizer: range and bearing are measured directly in the body
frame, limited by horizontal field of view and maximum range, with
multiplicative range noise, additive bearing noise, and per-observation
dropout. Both backends discard observations beyond the interaction
cutoff ``d_lim``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Vec3, wrap_angle

BACKENDS = ("direct_exchange", "relative_vision")

# Relative heights below this are treated as exactly zero (planar case).
Z_EPS = 1e-6


@dataclass(frozen=True, slots=True)
class NeighborObservation:
    """Spherical coordinates of one neighbor in the focal body frame.

    ``theta_n`` is the inclination from body +Z (0 = straight above,
    pi/2 = level). When the relative height is below ``Z_EPS`` the
    observation is flagged ``z_r_zero`` and theta_n is pinned to pi/2,
    its continuous limit; the flag gates the vertical force channel.
    """

    d_n: float
    phi_n: float
    theta_n: float
    z_r_zero: bool = False


@dataclass(frozen=True, slots=True)
class SensorConfig:
    backend: str = "direct_exchange"
    d_lim: float = 7.2
    gnss_noise_std: float = 1.5
    vision_range_noise_frac: float = 0.05
    vision_bearing_noise_std: float = 0.02
    vision_fov_horizontal: float = math.radians(350.0)
    vision_max_range: float = 7.2
    dropout_prob: float = 0.05

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.d_lim <= 0.0:
            raise ValueError(f"d_lim must be > 0, got {self.d_lim}")
        for name in ("gnss_noise_std", "vision_range_noise_frac",
                     "vision_bearing_noise_std", "dropout_prob"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0.0 < self.vision_fov_horizontal <= 2.0 * math.pi:
            raise ValueError(
                f"vision_fov_horizontal must be in (0, 2*pi], got {self.vision_fov_horizontal}"
            )
        if self.vision_max_range <= 0.0:
            raise ValueError(f"vision_max_range must be > 0, got {self.vision_max_range}")


def relative_position_direct(focal_pos: Vec3, neighbor_pos: Vec3, focal_heading: float) -> Vec3:
    """World-frame position difference rotated into the focal body frame.

    The rotation is about Z only (heading), so the z component is the plain
    world height difference.
    """
    dx = neighbor_pos.x - focal_pos.x
    dy = neighbor_pos.y - focal_pos.y
    dz = neighbor_pos.z - focal_pos.z
    c = math.cos(focal_heading)
    s = math.sin(focal_heading)
    return Vec3(c * dx + s * dy, -s * dx + c * dy, dz)


def range_bearing_inclination(rel: Vec3) -> NeighborObservation:
    """Convert a body-frame offset to (range, bearing, inclination)."""
    d = rel.norm()
    if d == 0.0:
        raise ValueError("zero relative position has no bearing")
    phi = wrap_angle(math.atan2(rel.y, rel.x))  # atan2 can return exactly -pi
    horiz = math.hypot(rel.x, rel.y)
    if abs(rel.z) < Z_EPS:
        return NeighborObservation(d, phi, 0.5 * math.pi, z_r_zero=True)
    return NeighborObservation(d, phi, math.atan2(horiz, rel.z), z_r_zero=False)


def observe_neighbors(focal, others: Sequence, cfg: SensorConfig,
                      rng: np.random.Generator) -> list[NeighborObservation]:
    """Observations of ``others`` from ``focal`` under the configured backend.

    ``focal`` and the elements of ``others`` need ``pos`` (Vec3), ``heading``
    (radians), ``id``, and ``alive`` attributes. Output is ordered by
    neighbor id ascending. Noise is drawn for every candidate neighbor in id
    order regardless of later filtering, so the random stream consumption per
    call depends only on the number of candidates.
    """
    candidates = sorted((o for o in others if o.alive), key=lambda o: o.id)
    m = len(candidates)
    if m == 0:
        return []
    if cfg.backend == "direct_exchange":
        return _observe_direct(focal, candidates, cfg, rng, m)
    return _observe_vision(focal, candidates, cfg, rng, m)


def _observe_direct(focal, candidates, cfg, rng, m) -> list[NeighborObservation]:
    # gnss_noise_std is the RMS norm of the 3-D position error vector, so
    # each axis gets std/sqrt(3).
    axis_std = cfg.gnss_noise_std / math.sqrt(3.0)
    noise = rng.standard_normal((m, 3)) * axis_std
    out = []
    for k, other in enumerate(candidates):
        reported = Vec3(other.pos.x + noise[k, 0],
                        other.pos.y + noise[k, 1],
                        other.pos.z + noise[k, 2])
        rel = relative_position_direct(focal.pos, reported, focal.heading)
        if rel.norm() < 1e-12:
            continue
        obs = range_bearing_inclination(rel)
        if obs.d_n <= cfg.d_lim:
            out.append(obs)
    return out


def _observe_vision(focal, candidates, cfg, rng, m) -> list[NeighborObservation]:
    noise = rng.standard_normal((m, 3))
    drop = rng.random(m)
    half_fov = 0.5 * cfg.vision_fov_horizontal
    out = []
    for k, other in enumerate(candidates):
        rel = relative_position_direct(focal.pos, other.pos, focal.heading)
        if rel.norm() < 1e-12:
            continue
        true = range_bearing_inclination(rel)
        # What the camera cannot see is decided by true geometry.
        if true.d_n > cfg.vision_max_range or abs(true.phi_n) > half_fov:
            continue
        if drop[k] < cfg.dropout_prob:
            continue
        d = true.d_n * (1.0 + noise[k, 0] * cfg.vision_range_noise_frac)
        phi = wrap_angle(true.phi_n + noise[k, 1] * cfg.vision_bearing_noise_std)
        if true.z_r_zero:
            theta = true.theta_n  # planar assumption holds, keep level
        else:
            theta = true.theta_n + noise[k, 2] * cfg.vision_bearing_noise_std
            theta = min(max(theta, 0.0), math.pi)
        if d <= 0.0 or d > cfg.d_lim:
            continue
        out.append(NeighborObservation(d, phi, theta, z_r_zero=true.z_r_zero))
    return out
