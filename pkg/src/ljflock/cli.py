"""Command line interface: run | batch | plotdata.

``run`` executes one simulation and writes agents.csv, metrics.csv,
summary.json, and effective_config.ini into the output directory.
``batch`` repeats a run over a seed range with one subdirectory per seed
plus batch_summary.json. ``plotdata`` turns a finished run directory
into plot-ready tables (xy_headings.csv, path3d.csv, order.csv) and, by
default, rendered PNG figures alongside them.

Exit codes: 0 normal termination, 1 configuration or input error,
2 collision termination, 3 arena boundary termination.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import statistics
import sys
import time
from pathlib import Path

from . import engine
from .config import ConfigError, RunSetup, effective_config, parse_config
from .engine import RunLog
from .metrics import steady_state

logger = logging.getLogger(__name__)

_EXIT_BY_TERMINATION = {
    engine.TERMINATION_COMPLETED: 0,
    engine.TERMINATION_COLLISION: 2,
    engine.TERMINATION_BOUNDARY: 3,
}

STEADY_STATE_WINDOW = 100.0

SUMMARY_KEYS = (
    "seed", "n_agents", "backend", "termination", "steady_state_order",
    "min_pairwise_distance", "simulated_s", "runtime_s",
)


def _setup_logging() -> None:
    level_name = os.environ.get("FLOCK_LOG_LEVEL", "info").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level_name not in levels:
        print(f"FLOCK_LOG_LEVEL must be one of {sorted(levels)}, got {level_name!r}",
              file=sys.stderr)
        level_name = "info"
    logging.basicConfig(
        level=levels[level_name],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _load_setup(config_path: str | None, seed: int | None) -> RunSetup:
    text = ""
    if config_path is not None:
        try:
            text = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
    return parse_config(text, seed_override=seed)


def _steady_state_or_none(log: RunLog) -> float | None:
    try:
        return steady_state(log.metrics, STEADY_STATE_WINDOW)
    except ValueError:
        return None  # run ended before a full window was available


def _execute(setup: RunSetup, out_dir: Path, workers: int) -> tuple[int, dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    log = engine.run(setup.sim, setup.flock, setup.sensor, setup.plant,
                     setup.world, workers=workers)
    runtime = time.perf_counter() - started

    log.write_agents_csv(out_dir / "agents.csv")
    log.write_metrics_csv(out_dir / "metrics.csv")
    (out_dir / "effective_config.ini").write_text(effective_config(setup),
                                                  encoding="utf-8")
    min_d = log.min_pairwise_distance()
    summary = {
        "seed": setup.sim.seed,
        "n_agents": setup.sim.n_agents,
        "backend": setup.sensor.backend,
        "termination": log.termination,
        "steady_state_order": _steady_state_or_none(log),
        "min_pairwise_distance": None if math.isnan(min_d) else min_d,
        "simulated_s": log.metrics.t[-1] if log.metrics.t else 0.0,
        "runtime_s": runtime,
    }
    with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return _EXIT_BY_TERMINATION[log.termination], summary


def cmd_run(args: argparse.Namespace) -> int:
    try:
        setup = _load_setup(args.config, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    code, summary = _execute(setup, Path(args.out), args.workers)
    sso = summary["steady_state_order"]
    print(f"run finished: termination={summary['termination']} "
          f"steady_state_order={'n/a' if sso is None else f'{sso:.4f}'} "
          f"out={args.out}")
    return code


def _parse_seed_range(text: str) -> list[int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        return list(range(lo, hi + 1))
    return [int(text)]


def cmd_batch(args: argparse.Namespace) -> int:
    try:
        seeds = _parse_seed_range(args.seeds)
    except ValueError:
        print(f"config error: bad --seeds value {args.seeds!r} (expected A..B)",
              file=sys.stderr)
        return 1
    if not seeds:
        print(f"config error: empty seed range {args.seeds!r}", file=sys.stderr)
        return 1

    out_root = Path(args.out)
    results = []
    for seed in seeds:
        try:
            setup = _load_setup(args.config, seed)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 1
        seed_dir = out_root / f"seed_{seed}"
        try:
            code, summary = _execute(setup, seed_dir, args.workers)
        except Exception as exc:  # one broken run must not sink the batch
            logger.error("seed %d failed: %s", seed, exc)
            results.append({"seed": seed, "ok": False, "error": str(exc),
                            "termination": None, "steady_state_order": None,
                            "min_pairwise_distance": None})
            continue
        results.append({
            "seed": seed,
            "ok": code == 0,
            "termination": summary["termination"],
            "steady_state_order": summary["steady_state_order"],
            "min_pairwise_distance": summary["min_pairwise_distance"],
        })

    orders = [r["steady_state_order"] for r in results
              if r["ok"] and r["steady_state_order"] is not None]
    aggregate = {
        "n_runs": len(results),
        "n_success": sum(r["ok"] for r in results),
        "mean_steady_state_order": statistics.fmean(orders) if orders else None,
        "std_steady_state_order": statistics.pstdev(orders) if orders else None,
    }
    out_root.mkdir(parents=True, exist_ok=True)
    with open(out_root / "batch_summary.json", "w", encoding="utf-8") as fh:
        json.dump({"seeds": results, "aggregate": aggregate}, fh, indent=2)
        fh.write("\n")
    mean = aggregate["mean_steady_state_order"]
    print(f"batch finished: {aggregate['n_success']}/{aggregate['n_runs']} runs ok, "
          f"mean steady-state order "
          f"{'n/a' if mean is None else f'{mean:.4f}'}")
    return 0 if aggregate["n_success"] >= 1 else 1


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def cmd_plotdata(args: argparse.Namespace) -> int:
    run_dir = Path(args.run_dir)
    agents_path = run_dir / "agents.csv"
    metrics_path = run_dir / "metrics.csv"
    if not agents_path.is_file() or not metrics_path.is_file():
        print(f"plotdata: {run_dir} does not contain agents.csv and metrics.csv",
              file=sys.stderr)
        return 1
    every = args.every
    if every < 1:
        print(f"plotdata: --every must be >= 1, got {every}", file=sys.stderr)
        return 1

    a_header, a_rows = _read_csv(agents_path)
    col = {name: i for i, name in enumerate(a_header)}
    ticks = sorted({row[col["t"]] for row in a_rows}, key=float)
    kept = {t for i, t in enumerate(ticks) if i % every == 0}

    xy_rows = []
    p3_rows = []
    for row in a_rows:
        if row[col["t"]] not in kept:
            continue
        t = float(row[col["t"]])
        aid = int(row[col["id"]])
        x, y, z = (float(row[col[c]]) for c in ("x", "y", "z"))
        eta = float(row[col["eta"]])
        xy_rows.append((t, aid, x, y, math.cos(eta), math.sin(eta)))
        p3_rows.append((t, aid, x, y, z))

    m_header, m_rows = _read_csv(metrics_path)
    mcol = {name: i for i, name in enumerate(m_header)}
    order_rows = [
        (float(r[mcol["t"]]), float(r[mcol["order"]]))
        for i, r in enumerate(m_rows) if i % every == 0
    ]

    def write(name: str, header: tuple[str, ...], rows) -> Path:
        path = run_dir / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        return path

    write("xy_headings.csv", ("t", "id", "x", "y", "hx", "hy"), xy_rows)
    write("path3d.csv", ("t", "id", "x", "y", "z"), p3_rows)
    write("order.csv", ("t", "order"), order_rows)

    if not args.no_figures:
        from . import plotting  # matplotlib import deferred until needed

        plotting.render_xy_headings([r[1:] for r in xy_rows],
                                    run_dir / "xy_headings.png")
        plotting.render_path3d([r[1:] for r in p3_rows], run_dir / "path3d.png")
        plotting.render_order([r[0] for r in order_rows],
                              [r[1] for r in order_rows], run_dir / "order.png")
    print(f"plotdata written to {run_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ljflock",
        description="Decentralized UAV flocking simulator and report tool",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one simulation")
    p_run.add_argument("--config", help="run configuration file (defaults used if omitted)")
    p_run.add_argument("--seed", type=int, default=None, help="override [sim] seed")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--workers", type=int, default=1,
                       help="control-phase worker threads (result-identical)")
    p_run.set_defaults(func=cmd_run)

    p_batch = sub.add_parser("batch", help="run a seed range")
    p_batch.add_argument("--config", help="run configuration file")
    p_batch.add_argument("--seeds", required=True, help="inclusive seed range A..B")
    p_batch.add_argument("--out", required=True, help="output directory root")
    p_batch.add_argument("--workers", type=int, default=1)
    p_batch.set_defaults(func=cmd_batch)

    p_plot = sub.add_parser("plotdata", help="emit plot tables and figures for a run")
    p_plot.add_argument("run_dir", help="directory containing agents.csv and metrics.csv")
    p_plot.add_argument("--every", type=int, default=10,
                        help="keep every Nth control tick (default 10)")
    p_plot.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering, write CSV tables only")
    p_plot.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
