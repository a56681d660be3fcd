"""Order and steady-state metrics plus cohesion diagnostics.

The order value is the mean resultant length of the heading unit
vectors: 1 when every robot points the same way, near 0 for scattered
headings. The steady-state value is the order averaged over the final
window of a run (100 s by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import Vec3


@dataclass(slots=True)
class MetricSeries:
    """Time-aligned metric samples collected once per control tick."""

    t: list[float] = field(default_factory=list)
    order: list[float] = field(default_factory=list)
    min_pairwise_dist: list[float] = field(default_factory=list)
    mean_nn_dist: list[float] = field(default_factory=list)

    def append(self, t: float, order: float, min_d: float, mean_nn: float) -> None:
        self.t.append(t)
        self.order.append(order)
        self.min_pairwise_dist.append(min_d)
        self.mean_nn_dist.append(mean_nn)


def order_metric(headings: Sequence[float]) -> float:
    """Mean resultant length of the heading unit vectors, in [0, 1]."""
    n = len(headings)
    if n == 0:
        raise ValueError("order metric needs at least one heading")
    sc = 0.0
    ss = 0.0
    for h in headings:
        sc += math.cos(h)
        ss += math.sin(h)
    return math.sqrt(sc * sc + ss * ss) / n


def steady_state(series: MetricSeries, window: float = 100.0) -> float:
    """Mean order over the trailing ``window`` seconds of the series."""
    if not series.t:
        raise ValueError("empty metric series")
    t_end = series.t[-1]
    if t_end - series.t[0] < window:
        raise ValueError(
            f"series spans {t_end - series.t[0]:.3f} s, shorter than window {window} s"
        )
    lo = t_end - window
    tail = [psi for t, psi in zip(series.t, series.order) if t >= lo]
    return math.fsum(tail) / len(tail)  # fsum: exact mean for constant series


def cohesion_stats(positions: Sequence[Vec3]) -> tuple[float, float]:
    """Minimum pairwise distance and mean nearest-neighbor distance.

    Brute-force O(N^2) scan; fine at the swarm sizes this tool targets.
    """
    n = len(positions)
    if n < 2:
        raise ValueError("cohesion stats need at least two positions")
    nearest = [math.inf] * n
    overall = math.inf
    for i in range(n):
        pi = positions[i]
        for j in range(i + 1, n):
            pj = positions[j]
            d = math.sqrt(
                (pi.x - pj.x) ** 2 + (pi.y - pj.y) ** 2 + (pi.z - pj.z) ** 2
            )
            if d < nearest[i]:
                nearest[i] = d
            if d < nearest[j]:
                nearest[j] = d
            if d < overall:
                overall = d
    return overall, sum(nearest) / n
