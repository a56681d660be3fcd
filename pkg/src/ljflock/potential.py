"""Lennard-Jones force magnitude for inter-robot spacing.

The scalar law p(d) = -(4*alpha*epsilon/d) * [2*(sigma/d)^(2*alpha)
- (sigma/d)^alpha] with sigma = d_des / 2^(1/alpha), so the single zero
sits exactly at the desired distance d_des. Positive values attract the
focal robot toward the neighbor, negative values repel.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class PotentialParams:
    """Strength, steepness, and desired spacing of the force law."""

    epsilon: float = 6.0
    alpha: float = 2.0
    d_des: float = 6.0

    def __post_init__(self) -> None:
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.alpha < 1.0:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.d_des <= 0.0:
            raise ValueError(f"d_des must be > 0, got {self.d_des}")

    @property
    def sigma(self) -> float:
        """Length scale placing the force zero at d_des."""
        return sigma_from_ddes(self.alpha, self.d_des)


def sigma_from_ddes(alpha: float, d_des: float) -> float:
    """Length scale sigma = d_des / 2^(1/alpha)."""
    return d_des / 2.0 ** (1.0 / alpha)


def lj_magnitude(d_n: float, params: PotentialParams) -> float:
    """Force magnitude at range ``d_n``; positive = attraction.

    Raises ValueError for d_n <= 0, which can only come from a sensing bug
    upstream (ranges are strictly positive by construction).
    """
    if d_n <= 0.0:
        raise ValueError(f"range must be > 0, got {d_n}")
    # (sigma/d)^alpha written as d_des^alpha / (2 d^alpha): identical
    # algebraically, but exact (s = 0.5, bracket = 0) when d_n == d_des.
    s = params.d_des**params.alpha / (2.0 * d_n**params.alpha)
    return -(4.0 * params.alpha * params.epsilon / d_n) * (s * (2.0 * s - 1.0))


def clamp_magnitude(p: float, p_max: float) -> float:
    """Clip a force magnitude to [-p_max, +p_max]."""
    if p_max <= 0.0:
        raise ValueError(f"p_max must be > 0, got {p_max}")
    if p > p_max:
        return p_max
    if p < -p_max:
        return -p_max
    return p
