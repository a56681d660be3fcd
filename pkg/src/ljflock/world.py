"""Terrain, wind, and arena: the environment around the flock.

The dune field is a smooth product-of-sines heightfield so that ground
height is deterministic, bounded by the configured amplitude, and cheap
to sample. Wind is a constant mean plus an Ornstein-Uhlenbeck gust on
the horizontal axes (exact discretization, stationary start). The arena
is a closed rectangle: touching a border counts as a breach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Vec3

TERRAIN_KINDS = ("flat", "dunes")


@dataclass(frozen=True, slots=True)
class Terrain:
    kind: str = "flat"
    amplitude: float = 2.5
    wavelength_x: float = 30.0
    wavelength_y: float = 30.0
    phase: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in TERRAIN_KINDS:
            raise ValueError(f"terrain kind must be one of {TERRAIN_KINDS}, got {self.kind!r}")
        if self.amplitude < 0.0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.wavelength_x <= 0.0 or self.wavelength_y <= 0.0:
            raise ValueError("wavelengths must be > 0")


@dataclass(frozen=True, slots=True)
class Arena:
    x_min: float = -100.0
    x_max: float = 100.0
    y_min: float = -100.0
    y_max: float = 100.0

    def __post_init__(self) -> None:
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("arena max must exceed min on both axes")


@dataclass(frozen=True, slots=True)
class Wind:
    mean: Vec3 = Vec3(0.0, 0.0, 0.0)
    gust_std: float = 0.5
    correlation_time: float = 5.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.gust_std < 0.0:
            raise ValueError(f"gust_std must be >= 0, got {self.gust_std}")
        if self.correlation_time <= 0.0:
            raise ValueError(f"correlation_time must be > 0, got {self.correlation_time}")


@dataclass(frozen=True, slots=True)
class World:
    terrain: Terrain
    arena: Arena
    wind: Wind


def ground_height(terrain: Terrain, x: float, y: float) -> float:
    """Terrain elevation at (x, y); in [0, amplitude] for dunes, 0 when flat."""
    if terrain.kind == "flat":
        return 0.0
    sx = math.sin(2.0 * math.pi * x / terrain.wavelength_x + terrain.phase)
    sy = math.sin(2.0 * math.pi * y / terrain.wavelength_y)
    return terrain.amplitude * 0.5 * (1.0 + sx * sy)


def height_agl(terrain: Terrain, pos: Vec3) -> float:
    """Height above ground, as a downward rangefinder would measure it.

    Negative means the position is below the terrain surface.
    """
    return pos.z - ground_height(terrain, pos.x, pos.y)


def boundary_breached(arena: Arena, agents: Sequence) -> bool:
    """True when any alive agent sits on or outside the arena rectangle."""
    for a in agents:
        if not a.alive:
            continue
        if not (arena.x_min < a.pos.x < arena.x_max and arena.y_min < a.pos.y < arena.y_max):
            return True
    return False


class OUProcess:
    """Scalar Ornstein-Uhlenbeck process with exact discretization.

    Stationary std equals ``std``, lag-h autocorrelation exp(-h/tau).
    Starts from a stationary draw so there is no spin-up transient.
    """

    def __init__(self, mean: float, std: float, tau: float, rng: np.random.Generator):
        self.mean = mean
        self.std = std
        self.tau = tau
        self._rng = rng
        self.state = mean + std * float(rng.standard_normal()) if std > 0.0 else mean

    def step(self, dt: float) -> float:
        if self.std == 0.0:
            return self.state
        a = math.exp(-dt / self.tau)
        scatter = self.std * math.sqrt(1.0 - a * a)
        self.state = self.mean + a * (self.state - self.mean) + scatter * float(
            self._rng.standard_normal()
        )
        return self.state


class WindProcess:
    """Wind velocity stream for one agent: mean plus horizontal OU gusts.

    Vertical wind is the configured mean only; gustiness at these length
    scales is dominated by the horizontal components.
    """

    def __init__(self, wind: Wind, rng: np.random.Generator):
        self._mean = wind.mean
        self._gx = OUProcess(0.0, wind.gust_std, wind.correlation_time, rng)
        self._gy = OUProcess(0.0, wind.gust_std, wind.correlation_time, rng)

    def sample(self, dt: float) -> Vec3:
        return Vec3(
            self._mean.x + self._gx.step(dt),
            self._mean.y + self._gy.step(dt),
            self._mean.z,
        )


def wind_sample(process: WindProcess, dt: float) -> Vec3:
    """Advance a wind process one step and return the velocity."""
    return process.sample(dt)
