import math

import pytest
from hypothesis import given, strategies as st

from ljflock.geometry import (
    PSI_LIN,
    UnitQuat,
    _lerp_form,
    _sin_form,
    heading_of,
    heading_to_quat,
    heading_vector,
    slerp_step,
    wrap_angle,
)

finite_angle = st.floats(-10.0 * math.pi, 10.0 * math.pi,
                         allow_nan=False, allow_infinity=False)


def quat_close(q, w, x, y, z, tol=1e-12):
    return (abs(q.w - w) < tol and abs(q.x - x) < tol
            and abs(q.y - y) < tol and abs(q.z - z) < tol)


def test_wrap_angle_examples():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(3.0 * math.pi) == pytest.approx(math.pi, abs=1e-12)
    assert wrap_angle(-1.5 * math.pi) == pytest.approx(0.5 * math.pi, abs=1e-12)


def test_wrap_angle_boundary_is_positive_pi():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi


@given(finite_angle)
def test_wrap_angle_range_and_congruence(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    # same angle modulo a full turn
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


def test_heading_to_quat_closed_forms():
    assert quat_close(heading_to_quat(0.0), 1, 0, 0, 0)
    assert quat_close(heading_to_quat(math.pi), 0, 0, 0, 1)
    r = math.sqrt(0.5)
    assert quat_close(heading_to_quat(0.5 * math.pi), r, 0, 0, r)


@given(finite_angle)
def test_heading_roundtrip(eta):
    back = heading_of(heading_to_quat(eta))
    assert math.isclose(wrap_angle(back - wrap_angle(eta)), 0.0, abs_tol=1e-9)


def test_heading_vector_is_unit():
    v = heading_vector(0.3)
    assert v.x == pytest.approx(math.cos(0.3))
    assert v.y == pytest.approx(math.sin(0.3))
    assert v.z == 0.0


def test_slerp_endpoints():
    qa = heading_to_quat(0.4)
    qb = heading_to_quat(-1.1)
    out0 = slerp_step(qa, qb, 0.0)
    out1 = slerp_step(qa, qb, 1.0)
    assert quat_close(out0, qb.w, qb.x, qb.y, qb.z, tol=1e-12)
    assert quat_close(out1, qa.w, qa.x, qa.y, qa.z, tol=1e-12)


def test_slerp_midpoint_quarter_turn():
    # Oracle: interpolating Z rotations is linear in the angle, so halfway
    # from heading 0 toward heading pi/2 lands at pi/4.
    out = slerp_step(heading_to_quat(0.0), heading_to_quat(0.5 * math.pi), 0.5)
    assert heading_of(out) == pytest.approx(0.25 * math.pi, abs=1e-12)


@given(finite_angle, finite_angle, st.floats(0.0, 1.0))
def test_slerp_output_is_unit(eta_prev, eta_des, gamma):
    out = slerp_step(heading_to_quat(eta_prev), heading_to_quat(eta_des), gamma)
    assert abs(out.norm() - 1.0) < 1e-9


@given(
    st.floats(-math.pi, math.pi, allow_nan=False),
    st.floats(-math.pi, math.pi, allow_nan=False),
    st.floats(0.0, 1.0),
)
def test_slerp_matches_scalar_interpolation(eta_prev, eta_des, gamma):
    delta = wrap_angle(eta_prev - eta_des)
    if abs(abs(delta) - math.pi) < 1e-6:
        return  # both arcs are equally short; either answer is valid
    out = slerp_step(heading_to_quat(eta_prev), heading_to_quat(eta_des), gamma)
    expected = eta_des + gamma * delta
    assert abs(wrap_angle(heading_of(out) - expected)) < 1e-9


def test_slerp_branches_agree_at_switch_angle():
    # The two formulas must hand over smoothly at psi = PSI_LIN.
    q_prev = heading_to_quat(0.0)
    q_des = heading_to_quat(2.0 * PSI_LIN)  # quaternion angle = PSI_LIN
    for gamma in (0.0, 0.25, 0.5, 0.9, 1.0):
        a = _sin_form(q_prev, q_des, gamma, PSI_LIN)
        b = _lerp_form(q_prev, q_des, gamma)
        assert abs(heading_of(a) - heading_of(b)) < 1e-7


def test_slerp_shortest_arc_across_pi():
    # Headings 3.0 and -3.0 are 0.283 rad apart through the +-pi seam.
    out = slerp_step(heading_to_quat(3.0), heading_to_quat(-3.0), 0.5)
    eta = heading_of(out)
    assert abs(wrap_angle(eta - math.pi)) < (math.pi - 3.0) + 1e-9


def test_unit_quat_norm():
    q = UnitQuat(0.5, 0.5, 0.5, 0.5)
    assert q.norm() == pytest.approx(1.0)
