import math

import pytest
from hypothesis import given, strategies as st

from ljflock.potential import PotentialParams, clamp_magnitude, lj_magnitude, sigma_from_ddes

TABLE = PotentialParams(epsilon=6.0, alpha=2.0, d_des=6.0)


def lj_oracle(d, epsilon, alpha, d_des):
    """Independent evaluation via the explicit sigma form."""
    sigma = d_des / 2.0 ** (1.0 / alpha)
    r = (sigma / d) ** alpha
    return -(4.0 * alpha * epsilon / d) * (2.0 * r * r - r)


def potential_energy(d, epsilon, alpha, d_des):
    sigma = d_des / 2.0 ** (1.0 / alpha)
    return 4.0 * epsilon * ((sigma / d) ** (2 * alpha) - (sigma / d) ** alpha)


def test_sigma_examples():
    assert sigma_from_ddes(2.0, 6.0) == pytest.approx(6.0 / math.sqrt(2.0), abs=1e-12)
    assert sigma_from_ddes(1.0, 4.0) == 2.0
    assert sigma_from_ddes(2.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)


def test_sigma_puts_zero_at_ddes():
    assert lj_magnitude(6.0, TABLE) == pytest.approx(0.0, abs=1e-12)


def test_reference_values():
    assert lj_magnitude(3.0, TABLE) == pytest.approx(-96.0, abs=1e-9)
    assert lj_magnitude(12.0, TABLE) == pytest.approx(0.375, abs=1e-9)
    assert lj_magnitude(3.0, TABLE) == pytest.approx(
        lj_oracle(3.0, 6.0, 2.0, 6.0), abs=1e-9)
    assert lj_magnitude(12.0, TABLE) == pytest.approx(
        lj_oracle(12.0, 6.0, 2.0, 6.0), abs=1e-9)


@given(st.floats(0.5, 20.0))
def test_matches_independent_oracle(d):
    assert lj_magnitude(d, TABLE) == pytest.approx(
        lj_oracle(d, 6.0, 2.0, 6.0), rel=1e-12, abs=1e-12)


def test_matches_potential_slope():
    # The magnitude is the radial slope of the pair potential: negative
    # (repulsive) while the potential falls toward its minimum at d_des,
    # positive (attractive) beyond it.
    for d in (2.0, 4.5, 6.0, 7.5, 15.0):
        h = 1e-6 * d
        fd = (potential_energy(d + h, 6.0, 2.0, 6.0)
              - potential_energy(d - h, 6.0, 2.0, 6.0)) / (2.0 * h)
        assert lj_magnitude(d, TABLE) == pytest.approx(fd, rel=1e-5, abs=1e-6)


params_strategy = st.builds(
    PotentialParams,
    epsilon=st.floats(0.05, 50.0),
    alpha=st.floats(1.0, 8.0),
    d_des=st.floats(0.1, 100.0),
)


@given(params_strategy)
def test_zero_at_desired_distance(params):
    assert abs(lj_magnitude(params.d_des, params)) < 1e-9


@given(params_strategy, st.floats(0.05, 0.95), st.floats(1.05, 3.0))
def test_sign_structure(params, below_frac, above_frac):
    assert lj_magnitude(below_frac * params.d_des, params) < 0.0
    assert lj_magnitude(above_frac * params.d_des, params) > 0.0


@given(params_strategy, st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_repulsion_grows_toward_contact(params, fa, fb):
    d_a = min(fa, fb) * params.d_des
    d_b = max(fa, fb) * params.d_des
    if d_a == d_b:
        return
    assert abs(lj_magnitude(d_a, params)) > abs(lj_magnitude(d_b, params))


def test_invalid_range_rejected():
    with pytest.raises(ValueError):
        lj_magnitude(0.0, TABLE)
    with pytest.raises(ValueError):
        lj_magnitude(-1.0, TABLE)


def test_param_validation():
    with pytest.raises(ValueError):
        PotentialParams(epsilon=0.0)
    with pytest.raises(ValueError):
        PotentialParams(alpha=0.5)
    with pytest.raises(ValueError):
        PotentialParams(d_des=-1.0)


def test_clamp_examples():
    assert clamp_magnitude(-96.0, 10.0) == -10.0
    assert clamp_magnitude(0.375, 10.0) == 0.375
    assert clamp_magnitude(10.0, 10.0) == 10.0
    with pytest.raises(ValueError):
        clamp_magnitude(1.0, 0.0)


def test_cached_sigma_property():
    assert TABLE.sigma == pytest.approx(6.0 / math.sqrt(2.0), abs=1e-12)
