"""Run configuration files: parsing, validation, defaults, re-emission.

The format is line-oriented ``key = value`` text in INI sections. Unknown
sections or keys are rejected; missing keys fall back to the documented
defaults. Values that have a physical unit in the file are converted to
the engine's internal units here:

* ``[flocking] B_s`` is a speed in m/s; the controller works per control
  tick, so the effective bias is ``B_s / control_rate``.
* ``[plant]`` time constants stay in seconds; the physics step is derived
  from ``[sim] physics_rate``.
* ``[sensor] d_lim`` defaults to 7.2 m; if the file omits ``d_lim`` but
  sets ``lambda``, the cutoff becomes ``d_des * lambda`` instead.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass

from .controller import MODES, FlockingParams
from .engine import SPAWN_LAYOUTS, SimConfig, SpawnSpec
from .geometry import Vec3
from .plant import PlantParams
from .potential import PotentialParams
from .sensing import BACKENDS, SensorConfig
from .world import TERRAIN_KINDS, Arena, Terrain, Wind, World


class ConfigError(Exception):
    """Invalid run configuration; the message names the offending key."""


# section -> key -> (type tag, default). Defaults marked in the README as
# coming from the reference parameter set are kept verbatim here.
SCHEMA: dict[str, dict[str, tuple[str, object]]] = {
    "sim": {
        "n_agents": ("int", 9),
        "duration": ("float", 160.0),
        "control_rate": ("float", 10.0),
        "physics_rate": ("float", 20.0),
        "seed": ("int", 1),
        "hover_duration": ("float", 10.0),
        "d_collision": ("float", 1.0),
        "spawn_layout": ("str", "grid"),
        "spawn_spacing": ("float", 6.0),
        "spawn_altitude": ("float", 4.0),
        "spawn_heading": ("float", 0.0),
        "spawn_jitter": ("float", 0.1),
    },
    "flocking": {
        "kappa1": ("float", 0.5),
        "kappa2": ("float", 0.2),
        "kappa3": ("float", 0.1),
        "B_s": ("float", 0.3),
        "gamma": ("float", 0.95),
        "h_limit": ("float", 2.0),
        "mode": ("str", "full_3d"),
        "planar_alt": ("float", 4.0),
        "p_max": ("float", 2.0),
    },
    "potential": {
        "epsilon": ("float", 6.0),
        "alpha": ("float", 2.0),
        "d_des": ("float", 6.0),
    },
    "sensor": {
        "backend": ("str", "direct_exchange"),
        "d_lim": ("float", 7.2),
        "lambda": ("float", 1.8),
        "gnss_noise_std": ("float", 1.5),
        "vision_range_noise_frac": ("float", 0.05),
        "vision_bearing_noise_std": ("float", 0.02),
        "vision_fov_horizontal": ("float", math.radians(350.0)),
        "vision_max_range": ("float", 7.2),
        "dropout_prob": ("float", 0.05),
    },
    "plant": {
        "tau_xy": ("float", 0.8),
        "tau_z": ("float", 1.2),
        "tau_eta": ("float", 0.5),
        "v_max": ("float", 4.0),
    },
    "terrain": {
        "kind": ("str", "flat"),
        "amplitude": ("float", 2.5),
        "wavelength_x": ("float", 30.0),
        "wavelength_y": ("float", 30.0),
        "phase": ("float", 0.0),
        "seed": ("int", 0),
    },
    "wind": {
        "mean_x": ("float", 0.0),
        "mean_y": ("float", 0.0),
        "mean_z": ("float", 0.0),
        "gust_std": ("float", 0.5),
        "correlation_time": ("float", 5.0),
        "seed": ("int", 0),
    },
    "arena": {
        "x_min": ("float", -100.0),
        "x_max": ("float", 100.0),
        "y_min": ("float", -100.0),
        "y_max": ("float", 100.0),
    },
}

_ENUMS = {
    ("sim", "spawn_layout"): SPAWN_LAYOUTS,
    ("flocking", "mode"): MODES,
    ("sensor", "backend"): BACKENDS,
    ("terrain", "kind"): TERRAIN_KINDS,
}


@dataclass(frozen=True, slots=True)
class RunSetup:
    """Everything the engine needs for one run.

    ``b_s_speed`` keeps the forward bias in m/s exactly as configured so a
    re-emitted config reproduces the input bit for bit; ``flock.b_s`` holds
    the derived per-tick value the controller uses.
    """

    sim: SimConfig
    flock: FlockingParams
    sensor: SensorConfig
    plant: PlantParams
    world: World
    b_s_speed: float


def _parse_ini(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (B_s)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return {s: dict(parser.items(s)) for s in parser.sections()}


def _coerce(section: str, key: str, raw: str) -> object:
    kind, _ = SCHEMA[section][key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: expected a {kind}, got {raw!r}") from exc
    return raw.strip()


def parse_config(text: str, seed_override: int | None = None) -> RunSetup:
    """Build a validated RunSetup from config text.

    Raises ConfigError naming the offending section/key for unknown keys,
    type errors, or values the domain objects reject.
    """
    raw = _parse_ini(text)
    for section, keys in raw.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in keys:
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key [{section}] {key}")

    values: dict[str, dict[str, object]] = {}
    for section, keys in SCHEMA.items():
        got = raw.get(section, {})
        values[section] = {
            key: _coerce(section, key, got[key]) if key in got else default
            for key, (_, default) in keys.items()
        }
        for key in keys:
            allowed = _ENUMS.get((section, key))
            if allowed and values[section][key] not in allowed:
                raise ConfigError(
                    f"[{section}] {key}: must be one of {allowed}, "
                    f"got {values[section][key]!r}"
                )

    if seed_override is not None:
        values["sim"]["seed"] = seed_override

    # Interaction cutoff: explicit d_lim wins; a file that sets only lambda
    # gets d_des * lambda; otherwise the 7.2 m default applies.
    sensor_raw = raw.get("sensor", {})
    if "d_lim" not in sensor_raw and "lambda" in sensor_raw:
        values["sensor"]["d_lim"] = values["potential"]["d_des"] * values["sensor"]["lambda"]

    try:
        return _build(values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build(v: dict[str, dict[str, object]]) -> RunSetup:
    sim_v = v["sim"]
    sim = SimConfig(
        n_agents=sim_v["n_agents"],
        duration=sim_v["duration"],
        control_rate=sim_v["control_rate"],
        physics_rate=sim_v["physics_rate"],
        seed=sim_v["seed"],
        hover_duration=sim_v["hover_duration"],
        d_collision=sim_v["d_collision"],
        spawn=SpawnSpec(
            layout=sim_v["spawn_layout"],
            spacing=sim_v["spawn_spacing"],
            altitude=sim_v["spawn_altitude"],
            heading=sim_v["spawn_heading"],
            jitter=sim_v["spawn_jitter"],
        ),
    )
    fl = v["flocking"]
    flock = FlockingParams(
        kappa1=fl["kappa1"],
        kappa2=fl["kappa2"],
        kappa3=fl["kappa3"],
        b_s=fl["B_s"] / sim.control_rate,
        gamma=fl["gamma"],
        h_limit=fl["h_limit"],
        mode=fl["mode"],
        planar_alt=fl["planar_alt"],
        p_max=fl["p_max"],
        potential=PotentialParams(
            epsilon=v["potential"]["epsilon"],
            alpha=v["potential"]["alpha"],
            d_des=v["potential"]["d_des"],
        ),
    )
    se = v["sensor"]
    sensor = SensorConfig(
        backend=se["backend"],
        d_lim=se["d_lim"],
        gnss_noise_std=se["gnss_noise_std"],
        vision_range_noise_frac=se["vision_range_noise_frac"],
        vision_bearing_noise_std=se["vision_bearing_noise_std"],
        vision_fov_horizontal=se["vision_fov_horizontal"],
        vision_max_range=se["vision_max_range"],
        dropout_prob=se["dropout_prob"],
    )
    pl = v["plant"]
    plant = PlantParams(
        tau_xy=pl["tau_xy"],
        tau_z=pl["tau_z"],
        tau_eta=pl["tau_eta"],
        v_max=pl["v_max"],
        dt=1.0 / sim.physics_rate,
    )
    te = v["terrain"]
    wi = v["wind"]
    ar = v["arena"]
    b_s_speed = fl["B_s"]
    world = World(
        terrain=Terrain(
            kind=te["kind"],
            amplitude=te["amplitude"],
            wavelength_x=te["wavelength_x"],
            wavelength_y=te["wavelength_y"],
            phase=te["phase"],
            seed=te["seed"],
        ),
        arena=Arena(x_min=ar["x_min"], x_max=ar["x_max"],
                    y_min=ar["y_min"], y_max=ar["y_max"]),
        wind=Wind(
            mean=Vec3(wi["mean_x"], wi["mean_y"], wi["mean_z"]),
            gust_std=wi["gust_std"],
            correlation_time=wi["correlation_time"],
            seed=wi["seed"],
        ),
    )
    return RunSetup(sim=sim, flock=flock, sensor=sensor, plant=plant, world=world,
                    b_s_speed=b_s_speed)


def effective_config(setup: RunSetup) -> str:
    """Render a RunSetup back to config text with every key explicit.

    Parsing the result reproduces the same RunSetup (round-trip property).
    """
    sim = setup.sim
    fl = setup.flock
    se = setup.sensor
    pl = setup.plant
    te = setup.world.terrain
    ar = setup.world.arena
    wi = setup.world.wind
    out: dict[str, dict[str, object]] = {
        "sim": {
            "n_agents": sim.n_agents,
            "duration": sim.duration,
            "control_rate": sim.control_rate,
            "physics_rate": sim.physics_rate,
            "seed": sim.seed,
            "hover_duration": sim.hover_duration,
            "d_collision": sim.d_collision,
            "spawn_layout": sim.spawn.layout,
            "spawn_spacing": sim.spawn.spacing,
            "spawn_altitude": sim.spawn.altitude,
            "spawn_heading": sim.spawn.heading,
            "spawn_jitter": sim.spawn.jitter,
        },
        "flocking": {
            "kappa1": fl.kappa1,
            "kappa2": fl.kappa2,
            "kappa3": fl.kappa3,
            "B_s": setup.b_s_speed,
            "gamma": fl.gamma,
            "h_limit": fl.h_limit,
            "mode": fl.mode,
            "planar_alt": fl.planar_alt,
            "p_max": fl.p_max,
        },
        "potential": {
            "epsilon": fl.potential.epsilon,
            "alpha": fl.potential.alpha,
            "d_des": fl.potential.d_des,
        },
        "sensor": {
            "backend": se.backend,
            "d_lim": se.d_lim,
            "lambda": SCHEMA["sensor"]["lambda"][1],
            "gnss_noise_std": se.gnss_noise_std,
            "vision_range_noise_frac": se.vision_range_noise_frac,
            "vision_bearing_noise_std": se.vision_bearing_noise_std,
            "vision_fov_horizontal": se.vision_fov_horizontal,
            "vision_max_range": se.vision_max_range,
            "dropout_prob": se.dropout_prob,
        },
        "plant": {
            "tau_xy": pl.tau_xy,
            "tau_z": pl.tau_z,
            "tau_eta": pl.tau_eta,
            "v_max": pl.v_max,
        },
        "terrain": {
            "kind": te.kind,
            "amplitude": te.amplitude,
            "wavelength_x": te.wavelength_x,
            "wavelength_y": te.wavelength_y,
            "phase": te.phase,
            "seed": te.seed,
        },
        "wind": {
            "mean_x": wi.mean.x,
            "mean_y": wi.mean.y,
            "mean_z": wi.mean.z,
            "gust_std": wi.gust_std,
            "correlation_time": wi.correlation_time,
            "seed": wi.seed,
        },
        "arena": {
            "x_min": ar.x_min,
            "x_max": ar.x_max,
            "y_min": ar.y_min,
            "y_max": ar.y_max,
        },
    }
    buf = io.StringIO()
    for section, keys in out.items():
        buf.write(f"[{section}]\n")
        for key, value in keys.items():
            buf.write(f"{key} = {value!r}\n" if isinstance(value, float)
                      else f"{key} = {value}\n")
        buf.write("\n")
    return buf.getvalue()
