"""Figure rendering for run telemetry.

Renders the three standard report figures next to the plot-data tables:
a top-down trajectory plot with heading arrows, a 3D path plot, and the
order value over time. Uses the Agg backend so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_FIG_DPI = 130


def _by_agent(rows):
    """Split [(id, c1, c2, ...)] rows into {id: column tuples}."""
    out: dict[int, list[tuple]] = {}
    for row in rows:
        out.setdefault(int(row[0]), []).append(row[1:])
    return {k: list(zip(*v)) for k, v in out.items()}


def render_xy_headings(rows, path) -> None:
    """Top-down positions with heading arrows; rows are (id, x, y, hx, hy)."""
    per_agent = _by_agent(rows)
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for aid, (x, y, hx, hy) in sorted(per_agent.items()):
        ax.plot(x, y, lw=0.8, alpha=0.6)
        ax.quiver(x, y, hx, hy, angles="xy", scale_units="xy", scale=0.6,
                  width=0.003, alpha=0.8)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title("Trajectories and headings")
    fig.tight_layout()
    fig.savefig(path, dpi=_FIG_DPI)
    plt.close(fig)


def render_path3d(rows, path) -> None:
    """3D flight paths; rows are (id, x, y, z)."""
    per_agent = _by_agent(rows)
    fig = plt.figure(figsize=(6.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    for aid, (x, y, z) in sorted(per_agent.items()):
        ax.plot(x, y, z, lw=0.9)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel("z [m]")
    ax.set_title("3D paths")
    fig.tight_layout()
    fig.savefig(path, dpi=_FIG_DPI)
    plt.close(fig)


def render_order(t, order, path) -> None:
    """Order value against time."""
    fig, ax = plt.subplots(figsize=(6.5, 3.2))
    ax.plot(t, order, lw=1.2)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("order")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_FIG_DPI)
    plt.close(fig)
