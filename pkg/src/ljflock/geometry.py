"""Frames, planar heading algebra, and heading quaternions.

The world frame is Z-up. A heading is the azimuth of the body x-axis,
measured counterclockwise from world +X and wrapped to (-pi, pi]. The
controller smooths headings through unit quaternions representing
rotations about world +Z, so the quaternion helpers here only ever see
Z-axis rotations even though the interpolation formula is general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Inter-quaternion angle below which the sin() ratios of spherical
# interpolation are replaced by their linear limit (they are 0/0 at zero).
PSI_LIN = 1e-4


@dataclass(frozen=True, slots=True)
class Vec3:
    """Cartesian triple in meters; world or body frame per context."""

    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


ZERO3 = Vec3(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class UnitQuat:
    """Unit quaternion (w, x, y, z); norm 1 within 1e-9."""

    w: float
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def negated(self) -> "UnitQuat":
        return UnitQuat(-self.w, -self.x, -self.y, -self.z)


IDENTITY_QUAT = UnitQuat(1.0, 0.0, 0.0, 0.0)


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]; exact identity for angles already in range."""
    if -math.pi < a <= math.pi:
        return a
    r = a % TWO_PI  # in [0, 2*pi) for finite a
    if r > math.pi:
        r -= TWO_PI
    return r


def heading_to_quat(eta: float) -> UnitQuat:
    """Unit quaternion for a rotation of ``eta`` about world +Z."""
    half = 0.5 * eta
    return UnitQuat(math.cos(half), 0.0, 0.0, math.sin(half))


def heading_of(q: UnitQuat) -> float:
    """Azimuth of the body x-axis encoded by ``q``, wrapped to (-pi, pi]."""
    return math.atan2(
        2.0 * (q.w * q.z + q.x * q.y),
        1.0 - 2.0 * (q.y * q.y + q.z * q.z),
    )


def heading_vector(eta: float) -> Vec3:
    """Unit vector (cos eta, sin eta, 0) in the world XY plane."""
    return Vec3(math.cos(eta), math.sin(eta), 0.0)


def _dot(a: UnitQuat, b: UnitQuat) -> float:
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z


def _normalized(w: float, x: float, y: float, z: float) -> UnitQuat:
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return UnitQuat(w / n, x / n, y / n, z / n)


def _combine(ca: float, a: UnitQuat, cb: float, b: UnitQuat) -> UnitQuat:
    return _normalized(
        ca * a.w + cb * b.w,
        ca * a.x + cb * b.x,
        ca * a.y + cb * b.y,
        ca * a.z + cb * b.z,
    )


def slerp_step(q_prev_smoothed: UnitQuat, q_desired: UnitQuat, gamma: float) -> UnitQuat:
    """One smoothing step between the previous smoothed and the desired rotation.

    Spherical interpolation weighted by ``gamma``: gamma=1 keeps the previous
    smoothed quaternion, gamma=0 jumps to the desired one. Takes the shortest
    arc (sign-flips one input when their dot product is negative) and falls
    back to normalized linear interpolation when the inter-quaternion angle
    is below ``PSI_LIN``.
    """
    q_des = q_desired
    d = _dot(q_prev_smoothed, q_des)
    if d < 0.0:
        q_des = q_des.negated()
        d = -d
    d = min(d, 1.0)
    psi = math.acos(d)
    if psi < PSI_LIN:
        return _lerp_form(q_prev_smoothed, q_des, gamma)
    return _sin_form(q_prev_smoothed, q_des, gamma, psi)


def _sin_form(q_prev: UnitQuat, q_des: UnitQuat, gamma: float, psi: float) -> UnitQuat:
    s = math.sin(psi)
    c_des = math.sin((1.0 - gamma) * psi) / s
    c_prev = math.sin(gamma * psi) / s
    return _combine(c_des, q_des, c_prev, q_prev)


def _lerp_form(q_prev: UnitQuat, q_des: UnitQuat, gamma: float) -> UnitQuat:
    return _combine(1.0 - gamma, q_des, gamma, q_prev)
