"""Numerical kernel: adaptive quadrature, Gamma function, sphere areas and
golden-section minimisation.

Everything here is a pure function of its arguments.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, PoleError

__all__ = [
    "QuadResult",
    "integrate_adaptive",
    "gamma_fn",
    "sphere_area",
    "ball_volume",
    "minimize_scalar",
    "DEFAULT_REL_TOL",
    "DEFAULT_ABS_TOL",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-14
MAX_DEPTH = 60
MAX_INTERVALS = 200_000

# 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15 tables).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout: negative half, centre, positive half
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KW = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GW = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (1, 3, 5) plus the centre
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[13, 11, 9]] = _WG[:3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int

    def __iter__(self):
        # allows ``value, err, n = integrate_adaptive(...)``
        return iter((self.value, self.error_estimate, self.evaluations))


def _as_vectorized(f):
    def g(x):
        return np.array([f(float(xi)) for xi in x.ravel()], dtype=float).reshape(x.shape)
    return g


def _gk_batch(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise ConvergenceFailure(f"integrand not finite at x={bad!r}")
    kron = half * (fx @ _KW)
    gauss = half * (fx @ _GW)
    resabs = np.abs(half) * (np.abs(fx) @ _KW)
    return kron, np.abs(kron - gauss), resabs


def integrate_adaptive(f, a, b, rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL,
                       *, points=None, vectorized=False, max_depth=MAX_DEPTH):
    """Integrate ``f`` over ``(a, b)`` by globally adaptive Gauss-Kronrod bisection.

    Both rules are open, so ``f`` is never evaluated at ``a``, ``b`` or any
    interior breakpoint in ``points``. Integrable endpoint singularities are
    therefore allowed, though a change of variables usually converges faster.

    If ``vectorized`` is true, ``f`` receives a 2-D ndarray of abscissae and
    must return values of the same shape.

    Raises ConvergenceFailure if an interval that still needs refining has
    been bisected ``max_depth`` times.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if rel_tol <= 0 and abs_tol <= 0:
        raise ValueError("at least one tolerance must be positive")
    fv = f if vectorized else _as_vectorized(f)

    edges = [a]
    if points is not None:
        edges += sorted(float(p) for p in points if a < p < b)
    edges.append(b)
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    val, err, resabs = _gk_batch(fv, lo, hi)
    depth = np.zeros(lo.size, dtype=int)
    nevals = 15 * lo.size

    while True:
        total = float(np.sum(val))
        tot_err = float(np.sum(err))
        tol = max(rel_tol * abs(total), abs_tol)
        if tot_err <= tol:
            return QuadResult(total, tot_err, nevals)

        # intervals whose Kronrod/Gauss gap is at round-off level cannot improve
        frozen = err <= 50.0 * _EPS * resabs
        cand = np.flatnonzero(~frozen)
        if cand.size == 0:
            raise ConvergenceFailure(
                f"round-off limits accuracy: error {tot_err:.3e} > tolerance {tol:.3e}")
        order = cand[np.argsort(-err[cand], kind="stable")]
        remaining = tot_err - np.cumsum(err[order])
        k = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        pick = order[:max(1, min(k, order.size))]

        if np.any(depth[pick] >= max_depth):
            raise ConvergenceFailure(
                f"recursion depth {max_depth} reached with error {tot_err:.3e} "
                f"> tolerance {tol:.3e} on [{a}, {b}]")
        if lo.size + pick.size > MAX_INTERVALS:
            raise ConvergenceFailure(f"more than {MAX_INTERVALS} subintervals needed")

        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne, nr = _gk_batch(fv, new_lo, new_hi)
        nevals += 15 * new_lo.size
        nd = np.concatenate([depth[pick], depth[pick]]) + 1

        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        resabs = np.concatenate([resabs[keep], nr])
        depth = np.concatenate([depth[keep], nd])


# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _gamma_lanczos(x):
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power to avoid overflow for large x
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * acc


def gamma_fn(x):
    """Gamma function for real ``x``, relative error below 1e-12 on |x| <= 50."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x == math.floor(x) and x <= 21:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        # reflection; sin(pi x) via the reduced argument keeps precision
        return math.pi / (_sinpi(x) * gamma_fn(1.0 - x))
    return _gamma_lanczos(x)


def _sinpi(x):
    n = math.floor(x)
    r = x - n
    v = math.sin(math.pi * r) if r <= 0.5 else math.sin(math.pi * (1.0 - r))
    return -v if int(n) % 2 else v


def sphere_area(N):
    """Surface measure of the unit sphere in R^N; |S^0| = 2 (two points)."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    return 2.0 * math.pi ** (N / 2.0) / gamma_fn(N / 2.0)


def ball_volume(N, R=1.0):
    return sphere_area(N) * R ** N / N


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(f, lo, hi, tol=1e-10):
    """Golden-section search for the minimum of a unimodal ``f`` on [lo, hi].

    Returns ``(argmin, min)``. The bracket endpoints are never evaluated.
    Near a smooth minimum, floating point resolves ``argmin`` only to about
    sqrt(machine epsilon) relative; the minimum value is much more accurate.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
            if f1 < best_f:
                best_x, best_f = x1, f1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
            if f2 < best_f:
                best_x, best_f = x2, f2
        if x1 >= x2:
            break
    mid = 0.5 * (lo + hi)
    fm = f(mid)
    if fm <= best_f:
        return mid, fm
    return best_x, best_f
