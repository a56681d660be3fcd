"""Decentralized 3D UAV flocking: proximal-only control, simulator, metrics."""

from .controller import (
    FlockingParams,
    MotionCommand,
    ProximalVector,
    ReferenceState,
    advance_reference,
    controller_step,
    motion_command,
    proximal_vector,
)
from .engine import RunLog, SimConfig, SpawnSpec, run, spawn_flock
from .geometry import UnitQuat, Vec3, heading_of, heading_to_quat, slerp_step, wrap_angle
from .metrics import MetricSeries, cohesion_stats, order_metric, steady_state
from .plant import AgentState, PlantParams, track_step
from .potential import PotentialParams, clamp_magnitude, lj_magnitude, sigma_from_ddes
from .sensing import (
    NeighborObservation,
    SensorConfig,
    observe_neighbors,
    range_bearing_inclination,
    relative_position_direct,
)
from .world import (
    Arena,
    Terrain,
    Wind,
    WindProcess,
    World,
    boundary_breached,
    ground_height,
    height_agl,
    wind_sample,
)

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "Arena",
    "FlockingParams",
    "MetricSeries",
    "MotionCommand",
    "NeighborObservation",
    "PlantParams",
    "PotentialParams",
    "ProximalVector",
    "ReferenceState",
    "RunLog",
    "SensorConfig",
    "SimConfig",
    "SpawnSpec",
    "Terrain",
    "UnitQuat",
    "Vec3",
    "Wind",
    "WindProcess",
    "World",
    "advance_reference",
    "boundary_breached",
    "clamp_magnitude",
    "cohesion_stats",
    "controller_step",
    "ground_height",
    "heading_of",
    "heading_to_quat",
    "height_agl",
    "lj_magnitude",
    "motion_command",
    "observe_neighbors",
    "order_metric",
    "proximal_vector",
    "range_bearing_inclination",
    "relative_position_direct",
    "run",
    "sigma_from_ddes",
    "slerp_step",
    "spawn_flock",
    "steady_state",
    "track_step",
    "wind_sample",
    "wrap_angle",
]
