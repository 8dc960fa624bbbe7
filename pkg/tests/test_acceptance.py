"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion k: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary. Run directly with
``python3 tests/test_acceptance.py`` to get just the lines.
"""

import math
import time

import numpy as np
from scipy import special

from fracthardy.constants import (
    hardy_constant,
    hardy_constant_crosscheck,
    remainder_constant,
)
from fracthardy.graph_gsr import gsr_identity, gsr_remainder_gap, random_instance
from fracthardy.inequalities import (
    boundary_profile,
    residual_convexity,
    residual_numbers,
    residual_numbers_improved,
)
from fracthardy.lorentz import (
    StepRadialFunction,
    lorentz_nesting_gap,
    lorentz_norm,
    random_step_function,
    symmdecr_identity_gap,
)
from fracthardy.params import make_params
from fracthardy.radial import (
    RadialPiecewisePower,
    isoperimetric_check,
    rayleigh_quotient,
    remainder_check,
    sharpness_scan,
    step_function,
    trial_function,
)
from fracthardy.rearrangement import (
    J_ABS,
    J_ASYM,
    J_CUBE,
    J_SQUARE,
    GeometricKernel,
    PowerKernel,
    exhaustive_sweep,
)

RESULTS = {}
SEED = 20240607


def report(k, ok, detail):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    assert ok, line


def rng():
    return np.random.default_rng(SEED)


def test_criterion_01_closed_form_n1_p1():
    worst, slowest = 0.0, 0.0
    for s in (0.1, 0.3, 0.5, 0.7, 0.9):
        t = time.perf_counter()
        v = hardy_constant(make_params(1, s, 1)).value
        slowest = max(slowest, time.perf_counter() - t)
        worst = max(worst, abs(v / (2 ** (2 - s) / s) - 1))
    report(1, worst <= 1e-8 and slowest < 1.0,
           f"max rel err {worst:.1e} (tol 1e-8), slowest {slowest:.2f} s (limit 1 s)")


def test_criterion_02_closed_form_p2():
    worst, slowest = 0.0, 0.0
    g = special.gamma
    for N in (1, 2, 3, 4):
        for s in (0.3, 0.7):
            if s == N / 2:
                continue
            exact = (2 * math.pi ** (N / 2) * g((N + 2 * s) / 4) ** 2 / g((N - 2 * s) / 4) ** 2
                     * abs(g(-s)) / g((N + 2 * s) / 2))
            t = time.perf_counter()
            v = hardy_constant(make_params(N, s, 2)).value
            slowest = max(slowest, time.perf_counter() - t)
            worst = max(worst, abs(v / exact - 1))
    report(2, worst <= 1e-8 and slowest < 5.0,
           f"max rel err {worst:.1e} (tol 1e-8), slowest {slowest:.2f} s (limit 5 s)")


ROUTE_GRID = [(1, 0.25, 1), (1, 0.5, 1.5), (2, 0.5, 2), (2, 0.3, 4), (3, 0.5, 2.5),
              (4, 0.5, 1), (3, 0.25, 3), (1, 0.75, 2), (1, 0.9, 3), (2, 0.75, 4),
              (3, 0.9, 5), (1, 0.6, 2.5)]


def test_criterion_03_route_agreement():
    worst, slowest = 0.0, 0.0
    branches = set()
    for N, s, p in ROUTE_GRID:
        P = make_params(N, s, p)
        branches.add(P.subcritical)
        t = time.perf_counter()
        a = hardy_constant(P).value
        b = hardy_constant_crosscheck(P).value
        slowest = max(slowest, time.perf_counter() - t)
        worst = max(worst, abs(a - b) / a)
    ok = worst <= 1e-6 and slowest < 30.0 and branches == {True, False}
    report(3, ok, f"{len(ROUTE_GRID)} points, both branches, max rel diff {worst:.1e} "
                  f"(tol 1e-6), slowest {slowest:.2f} s (limit 30 s)")


def test_criterion_04_remainder_constant():
    d2 = remainder_constant(2)
    d3 = abs(remainder_constant(3) - (2 - math.sqrt(2)))
    d4 = abs(remainder_constant(4) - 1 / 3)
    tau = np.linspace(0.0, 0.5, 2_000_001)
    dp = max(abs(float(np.min(boundary_profile(tau, p))) - remainder_constant(p))
             for p in (2, 2.5, 3, 4, 6))
    ok = d2 == 1.0 and d3 <= 1e-10 and d4 <= 1e-10 and dp <= 1e-10
    report(4, ok, f"c_2 = {d2!r}, |c_3 - (2-sqrt2)| = {d3:.1e}, |c_4 - 1/3| = {d4:.1e}, "
                  f"profile-min diff {dp:.1e}")


def test_criterion_05_convexity_property_suite():
    r = rng()
    n = 100_000
    worst = {}
    a = 5 * np.sqrt(r.random(n)) * np.exp(2j * np.pi * r.random(n))
    t = r.random(n)
    p = r.uniform(1, 6, n)
    scale = (1 + np.abs(a)) ** p
    worst["numbers"] = float(np.min(residual_numbers(a, t, p) / scale))
    p2 = r.uniform(2, 6, n)
    scale2 = (1 + np.abs(a)) ** p2
    worst["improved"] = float(np.min(residual_numbers_improved(a, t, p2) / scale2))
    va = r.normal(size=(n, 3)) + 1j * r.normal(size=(n, 3))
    vb = 3 * (r.normal(size=(n, 3)) + 1j * r.normal(size=(n, 3)))
    nab = np.linalg.norm(va, axis=1) + np.linalg.norm(vb, axis=1)
    conv, rem = [], []
    for q in (1.0, 1.5, 2.0, 3.0, 4.5):
        conv.append(np.min(residual_convexity(va, vb, q) / nab ** q))
        if q >= 2:
            rem.append(np.min(residual_convexity(va, vb, q, with_remainder=True) / nab ** q))
    worst["convexity"] = float(min(conv))
    worst["convexity_remainder"] = float(min(rem))
    z = float(np.max(np.abs(residual_numbers_improved(a, t, 2.0)) / (1 + np.abs(a)) ** 2))
    ok = min(worst.values()) >= -1e-12 and z <= 1e-12
    detail = ", ".join(f"{k} min {v:.1e}" for k, v in worst.items())
    report(5, ok, f"{n} samples per form: {detail}; p=2 improved max {z:.1e}")


def test_criterion_06_graph_gsr():
    r = rng()
    t0 = time.perf_counter()
    worst_id = 0.0
    for _ in range(1000):
        n = int(r.integers(2, 21))
        g, omega, u = random_instance(n, r)
        rep = gsr_identity(g, omega, u, float(r.uniform(1, 5)))
        worst_id = max(worst_id, abs(rep.residual) / rep.scale)
    worst_gap, worst_eq = 0.0, 0.0
    for k in range(10_000):
        p = (2.0, 2.5, 3.0, 4.0)[k % 4]
        n = int(r.integers(2, 21))
        g, omega, u = random_instance(n, r)
        rep = gsr_identity(g, omega, u, p)
        gap = gsr_remainder_gap(g, omega, u, p)
        worst_gap = min(worst_gap, gap / rep.scale)
        if p == 2.0:
            worst_eq = max(worst_eq, abs(gap) / rep.scale)
    elapsed = time.perf_counter() - t0
    ok = worst_id <= 1e-10 and worst_gap >= -1e-10 and worst_eq <= 1e-12 and elapsed < 60
    report(6, ok, f"identity rel {worst_id:.1e}, min remainder gap {worst_gap:.1e}, "
                  f"p=2 equality rel {worst_eq:.1e}, {elapsed:.1f} s (limit 60 s)")


def random_decreasing_step(r, K):
    radii = np.sort(r.uniform(0.1, 3.0, K))
    heights = np.sort(r.uniform(0.1, 5.0, K))[::-1]
    return step_function(tuple(radii), tuple(heights))


def test_criterion_07_p1_equality():
    r = rng()
    worst = 0.0
    for N, s in ((1, 0.5), (2, 0.5), (3, 0.25)):
        P = make_params(N, s, 1)
        C = hardy_constant(P).value
        for _ in range(20):
            q = rayleigh_quotient(P, random_decreasing_step(r, int(r.integers(1, 5))))
            worst = max(worst, abs(q / C - 1))
    report(7, worst <= 1e-5, f"60 step functions, max |quotient/C - 1| = {worst:.1e} (tol 1e-5)")


def test_criterion_08_sharpness():
    t0 = time.perf_counter()
    ns = [10, 100, 1000, 10000]
    parts, ok = [], True
    for N, s, p in ((1, 0.25, 1), (2, 0.5, 2), (1, 0.75, 2)):
        rows = sharpness_scan(make_params(N, s, p), ns)
        gaps = [g for _, _, g in rows]
        above = all(g > 0 for g in gaps)
        dec = all(b < a for a, b in zip(gaps, gaps[1:]))
        half = gaps[-1] <= gaps[0] / 2
        ok &= above and dec and half
        parts.append(f"({N},{s},{p}) gaps " + " ".join(f"{g:.2e}" for g in gaps)
                     + f" [above C {above}, decreasing {dec}, halved {half}]")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    report(8, ok, "; ".join(parts) + f"; {elapsed:.1f} s")


def trapezoid(a, b):
    return RadialPiecewisePower((0.0, a, b), ((0.0, 0.0, 1.0), (-1.0 / (b - a), -1.0, b / (b - a))))


def test_criterion_09_remainder():
    r = rng()
    worst_eq = 0.0
    # step functions have infinite energy once ps >= 1, so the (2, 0.5, 2)
    # inputs are continuous profiles
    P = make_params(1, 0.25, 2)
    for _ in range(5):
        u = step_function(tuple(np.sort(r.uniform(0.1, 3.0, 2))), tuple(r.uniform(-3, 3, 2)))
        lhs, rem = remainder_check(P, u)
        worst_eq = max(worst_eq, abs(lhs - rem) / abs(rem))
    Q = make_params(2, 0.5, 2)
    inputs = [trapezoid(*np.sort(r.uniform(0.2, 3.0, 2))) for _ in range(3)]
    inputs += [trial_function(Q, 10), trial_function(Q, 100)]
    for u in inputs:
        lhs, rem = remainder_check(Q, u)
        worst_eq = max(worst_eq, abs(lhs - rem) / abs(rem))
    R3 = make_params(1, 0.25, 3)
    worst_ineq = math.inf
    for _ in range(10):
        u = step_function(tuple(np.sort(r.uniform(0.1, 3.0, 2))), tuple(r.uniform(-3, 3, 2)))
        lhs, rem = remainder_check(R3, u)
        worst_ineq = min(worst_ineq, lhs / rem - 1)
    ok = worst_eq <= 1e-5 and worst_ineq >= 0
    report(9, ok, f"p=2 equality max rel {worst_eq:.1e} (tol 1e-5) on 5 + 5 inputs; "
                  f"p=3 min lhs/remainder - 1 = {worst_ineq:.2e} on 10 inputs")


def test_criterion_10_rearrangement_sweep():
    t0 = time.perf_counter()
    combos = [(PowerKernel(1.5), J_ABS, "power1.5/abs"), (GeometricKernel(0.5), J_SQUARE, "geom0.5/square"),
              (PowerKernel(3.0), J_CUBE, "power3/cube"), (GeometricKernel(0.3), J_ASYM, "geom0.3/asym")]
    parts, ok = [], True
    for k, J, name in combos:
        good, total, _ = exhaustive_sweep(3, 3, k, J)
        ok &= good == total == 16384
        parts.append(f"{name} {good}/{total}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    report(10, ok, ", ".join(parts) + f"; {elapsed:.1f} s (limit 30 s)")


def test_criterion_11_lorentz():
    r = rng()
    worst_sd = 0.0
    for N in (1, 2, 3):
        for s, p in ((0.25, 1.0), (0.5, 1.5), (0.3, 2.0)):
            P = make_params(N, s, p)
            u = random_step_function(r, 3)
            worst_sd = max(worst_sd, abs(symmdecr_identity_gap(P, u)) / lorentz_norm(u, N, P.p_star, p))
    worst_nest = math.inf
    for _ in range(1000):
        u = random_step_function(r, int(r.integers(1, 6)))
        N = int(r.integers(1, 4))
        q, p = r.uniform(1.1, 4), r.uniform(1, 3)
        for rr in (p + r.uniform(0.1, 3), math.inf):
            worst_nest = min(worst_nest, lorentz_nesting_gap(u, N, q, p, rr) / lorentz_norm(u, N, q, p))
    ind = StepRadialFunction((1.3,), (1.0,))
    eq = max(abs(lorentz_nesting_gap(ind, 2, 2.5, 1.5, rr)) for rr in (2.0, 4.0, math.inf))
    ok = worst_sd <= 1e-10 and worst_nest >= -1e-12 and eq <= 1e-14
    report(11, ok, f"symmdecr 3x3 max rel gap {worst_sd:.1e}; nesting min rel gap {worst_nest:.1e} "
                   f"on 1000 functions; indicator equality {eq:.1e}")


def test_criterion_12_isoperimetric():
    worst = 0.0
    for N, s in ((1, 0.5), (2, 0.5)):
        lhs, rhs = isoperimetric_check(make_params(N, s, 1), 1.0)
        worst = max(worst, abs(rhs / lhs - 1))
    report(12, worst <= 1e-5, f"max rel diff {worst:.1e} (tol 1e-5)")


def test_criterion_13_mazya_shaposhnikova():
    vals = []
    for N, p in ((2, 1.0), (3, 2.0)):
        for s in (0.01, 0.05, 0.95, 0.99):
            vals.append(hardy_constant(make_params(N, s, p)).value * s * (1 - s) / abs(N - p * s) ** p)
    ok = min(vals) >= 1e-3 and max(vals) <= 1e3
    report(13, ok, f"scaled constants in [{min(vals):.3g}, {max(vals):.3g}] (bounds 1e-3, 1e3)")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
