import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from fracthardy.errors import ConvergenceFailure, PoleError
from fracthardy.numerics import (
    QuadResult,
    ball_volume,
    gamma_fn,
    integrate_adaptive,
    minimize_scalar,
    sphere_area,
)


def test_constant_integrand():
    res = integrate_adaptive(lambda x: 1.0, 0.0, 1.0)
    assert isinstance(res, QuadResult)
    assert res.value == pytest.approx(1.0, rel=1e-14)
    assert res.evaluations > 0


def test_inverse_sqrt_endpoint_singularity():
    res = integrate_adaptive(lambda x: x ** -0.5, 0.0, 1.0, 1e-10, 0.0)
    assert res.value == pytest.approx(2.0, rel=1e-9)
    assert res.error_estimate < 1e-8


def test_gaussian_against_erf():
    res = integrate_adaptive(lambda x: math.exp(-x * x), 0.0, 6.0)
    assert res.value == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(6.0), rel=1e-12)


def test_vectorized_matches_scalar():
    f = lambda x: np.cos(3 * x) * np.exp(-x)
    a = integrate_adaptive(f, 0.0, 5.0, vectorized=True)
    b = integrate_adaptive(lambda x: math.cos(3 * x) * math.exp(-x), 0.0, 5.0)
    assert a.value == pytest.approx(b.value, rel=1e-12)


def test_breakpoints_help_kinks():
    res = integrate_adaptive(lambda x: abs(x - 0.3), 0.0, 1.0, points=[0.3])
    assert res.value == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-13)


def test_result_unpacks():
    value, err, n = integrate_adaptive(math.sin, 0.0, math.pi)
    assert value == pytest.approx(2.0, rel=1e-12) and n > 0


def test_nonintegrable_raises():
    with pytest.raises(ConvergenceFailure):
        integrate_adaptive(lambda x: 1.0 / x, 0.0, 1.0, 1e-10, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.5, 4.0), st.floats(-2.0, 2.0))
def test_additivity(c, k, ph):
    f = lambda x: math.sin(k * x + ph) + x * x
    whole = integrate_adaptive(f, 0.0, 1.0).value
    parts = integrate_adaptive(f, 0.0, c).value + integrate_adaptive(f, c, 1.0).value
    assert whole == pytest.approx(parts, rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("x, expected", [
    (5.0, 24.0),
    (0.5, math.sqrt(math.pi)),
    (-0.5, -2.0 * math.sqrt(math.pi)),
    (1.0, 1.0),
])
def test_gamma_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)


def test_gamma_poles():
    for x in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            gamma_fn(x)


def test_gamma_against_scipy():
    xs = np.concatenate([np.linspace(-9.7, -0.1, 97), np.linspace(0.01, 50, 500)])
    xs = xs[np.abs(xs - np.round(xs)) > 1e-6]
    ours = np.array([gamma_fn(x) for x in xs])
    assert np.max(np.abs(ours / special.gamma(xs) - 1)) < 1e-12


def test_gamma_recurrence(rng):
    xs = rng.uniform(0.1, 40.0, 10_000)
    worst = max(abs(gamma_fn(x + 1) / (x * gamma_fn(x)) - 1) for x in xs)
    assert worst < 1e-12


@pytest.mark.parametrize("N, expected", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi)])
def test_sphere_area(N, expected):
    assert sphere_area(N) == pytest.approx(expected, rel=1e-14)


def test_sphere_area_definition():
    for N in range(1, 12):
        assert sphere_area(N) == 2 * math.pi ** (N / 2) / gamma_fn(N / 2)
        assert ball_volume(N, 2.0) == pytest.approx(sphere_area(N) * 2.0 ** N / N, rel=1e-14)


def test_minimize_quadratic():
    x, fx = minimize_scalar(lambda t: (t - 0.3) ** 2, 0.0, 0.5)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(0.0, abs=1e-14)


def test_minimize_cp_objectives():
    x, fx = minimize_scalar(lambda t: (1 - t) ** 3 - t ** 3 + 3 * t * t, 0.0, 0.5)
    assert x == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-7)
    assert fx == pytest.approx(2 - math.sqrt(2), abs=1e-12)
    x, fx = minimize_scalar(lambda t: (1 - t) ** 4 - t ** 4 + 4 * t ** 3, 0.0, 0.5)
    assert x == pytest.approx(1 / 3, abs=1e-7)
    assert fx == pytest.approx(1 / 3, abs=1e-12)
