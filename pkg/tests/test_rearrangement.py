
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracthardy.errors import InvalidParams
from fracthardy.rearrangement import (
    J_ABS,
    J_ASYM,
    J_CUBE,
    J_SQUARE,
    GeometricKernel,
    GridFunction1D,
    PowerKernel,
    exhaustive_sweep,
    lattice_energy,
    layer_cake_energy,
    placement_order,
    rearrange,
    rearrangement_gap,
)


def brute_energy(u, kernel, J, reach=200):
    # independent double loop over a wide window of Z
    M = u.support_radius
    sites = range(-M - reach, M + reach + 1)
    total = 0.0
    for i in range(-M, M + 1):
        for j in sites:
            if i != j:
                d = abs(i - j)
                total += J(u[i] - u[j]) * kernel(d)
                if not -M <= j <= M:
                    total += J(u[j] - u[i]) * kernel(d)
    return float(total)


def test_placement_order():
    assert placement_order(2) == [0, 1, -1, 2, -2]


def test_rearrange_examples():
    u = GridFunction1D.from_sites({0: 3.0}, M=2)
    assert rearrange(u) == u
    v = rearrange(GridFunction1D.from_sites({-2: 1.0, 0: 2.0, 5: 3.0}))
    assert (v[0], v[1], v[-1]) == (3.0, 2.0, 1.0)
    assert sum(v.values) == 6.0


@settings(max_examples=200)
@given(st.lists(st.floats(0, 10), min_size=1, max_size=9).filter(lambda v: len(v) % 2 == 1))
def test_rearrange_invariants(vals):
    u = GridFunction1D(tuple(vals))
    v = rearrange(u)
    assert rearrange(v) == v
    assert sorted(v.values) == sorted(u.values)
    a, b = u.as_array(), v.as_array()
    for q in (1, 2):
        assert np.sum(b ** q) == pytest.approx(np.sum(a ** q), rel=1e-14)
    assert np.max(b) == np.max(a)


def test_constant_energy_zero_on_window():
    u = GridFunction1D((2.0, 2.0, 2.0))
    assert lattice_energy(u, PowerKernel(2), J_ABS, window=1) == 0.0


def test_window_example():
    u = GridFunction1D.from_sites({0: 1.0})
    assert lattice_energy(u, lambda d: d ** -2.0, J_ABS, window=2) == pytest.approx(5.0, rel=1e-15)


def test_infinite_lattice_single_spike():
    # 2 sum_{d >= 1} 2 d^{-2} = 4 zeta(2)
    u = GridFunction1D.from_sites({0: 1.0})
    assert lattice_energy(u, PowerKernel(2), J_ABS) == pytest.approx(4 * np.pi ** 2 / 6, rel=1e-14)


@pytest.mark.parametrize("kernel", [GeometricKernel(0.5), PowerKernel(2.5)])
@pytest.mark.parametrize("J", [J_ABS, J_SQUARE, J_ASYM])
def test_energy_against_brute_force(kernel, J):
    u = GridFunction1D((2.0, 3.0, 1.0))
    reach = 200 if isinstance(kernel, GeometricKernel) else 20000
    rel = 1e-12 if isinstance(kernel, GeometricKernel) else 1e-6
    assert lattice_energy(u, kernel, J) == pytest.approx(brute_energy(u, kernel, J, reach), rel=rel)


def test_gap_example_geometric():
    # (2@-1, 3@0, 1@1) rearranges to (1@-1, 3@0, 2@1), its mirror image
    u = GridFunction1D((2.0, 3.0, 1.0))
    k = GeometricKernel(0.5)
    gap = rearrangement_gap(u, k, J_SQUARE)
    direct = brute_energy(u, k, J_SQUARE) - brute_energy(rearrange(u), k, J_SQUARE)
    assert gap == pytest.approx(direct, abs=1e-12)
    assert gap >= -1e-12


def test_symmetric_decreasing_zero_gap():
    u = GridFunction1D((1.0, 3.0, 5.0, 4.0, 2.0))
    assert rearrangement_gap(u, PowerKernel(1.5), J_CUBE) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("shift", [1, 3, -4])
def test_translate_is_equality_case(shift):
    u = rearrange(GridFunction1D((1.0, 2.0, 4.0, 3.0, 0.5)))
    v = u.translated(shift)
    gap = rearrangement_gap(v, PowerKernel(1.5), J_SQUARE)
    scale = lattice_energy(v, PowerKernel(1.5), J_SQUARE)
    assert abs(gap) <= 1e-9 * scale


def test_non_translate_strict():
    u = GridFunction1D((3.0, 0.0, 2.0))
    assert rearrangement_gap(u, PowerKernel(1.5), J_SQUARE) > 1e-3


def test_window_translate_tolerance():
    # with a finite window the boundary breaks exact equality, but a translate
    # that stays well inside the window keeps the gap tiny relative to E
    u = GridFunction1D.from_sites({0: 3.0, 1: 2.0, -1: 1.0}, M=1).translated(2)
    k = GeometricKernel(0.3)
    gap = rearrangement_gap(u, k, J_SQUARE, window=30)
    assert abs(gap) <= 1e-9 * lattice_energy(u, k, J_SQUARE, window=30)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_layer_cake(vals):
    u = GridFunction1D(tuple(float(v) for v in vals))
    k = PowerKernel(1.5)
    assert layer_cake_energy(u, k) == pytest.approx(lattice_energy(u, k, J_ABS), rel=1e-12, abs=1e-12)


def test_exhaustive_small():
    good, total, gmin = exhaustive_sweep(1, 2, PowerKernel(1.5), J_ASYM)
    assert (good, total) == (27, 27) and gmin >= -1e-12


def test_exhaustive_full_cube():
    good, total, _ = exhaustive_sweep(3, 3, PowerKernel(1.5), J_CUBE)
    assert good == total == 16384


def test_validation():
    with pytest.raises(InvalidParams):
        GridFunction1D((1.0, 2.0))
    with pytest.raises(InvalidParams):
        GridFunction1D((-1.0,))
    with pytest.raises(InvalidParams):
        PowerKernel(1.0)
    with pytest.raises(InvalidParams):
        GeometricKernel(1.0)
