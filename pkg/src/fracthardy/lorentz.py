"""Lorentz quasinorms of radial step functions, computed exactly.

A step function with radii R_1 < ... < R_K and heights h_1 > ... > h_K > 0
equals h_k on the annulus R_{k-1} <= |x| < R_k. Its distribution function
mu(t) is piecewise constant in t, so every Lorentz integral is a finite sum.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .numerics import ball_volume, gamma_fn, integrate_adaptive, sphere_area
from .rearrangement import GridFunction1D

__all__ = [
    "StepRadialFunction",
    "distribution_function",
    "lorentz_norm",
    "step_weighted_norm",
    "symmdecr_identity_gap",
    "lorentz_nesting_gap",
    "gaussian_decomposition_gap",
    "random_step_function",
]


@dataclass(frozen=True)
class StepRadialFunction:
    radii: tuple
    heights: tuple

    def __post_init__(self):
        R = tuple(float(r) for r in self.radii)
        h = tuple(float(x) for x in self.heights)
        if len(R) != len(h) or not R:
            raise InvalidParams("need the same positive number of radii and heights")
        if any(b <= a for a, b in zip(R, R[1:])) or R[0] <= 0 or not math.isfinite(R[-1]):
            raise InvalidParams("radii must be finite, positive and strictly increasing")
        if any(b >= a for a, b in zip(h, h[1:])) or h[-1] <= 0:
            raise InvalidParams("heights must be positive and strictly decreasing")
        object.__setattr__(self, "radii", R)
        object.__setattr__(self, "heights", h)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(np.array(self.radii), r, side="right")
        h = np.append(np.array(self.heights), 0.0)
        return h[idx]

    def scaled(self, lam):
        """x -> u(x / lam)."""
        return StepRadialFunction(tuple(lam * r for r in self.radii), self.heights)

    def layers(self):
        """(radius, thickness) pairs of the layer-cake decomposition
        u = sum (h_k - h_{k+1}) chi_{B_{R_k}}."""
        h = self.heights + (0.0,)
        return [(R, h[k] - h[k + 1]) for k, R in enumerate(self.radii)]


def distribution_function(u, t, N=None):
    """mu_u(t) = |{|u| > t}|: Lebesgue measure for radial step functions
    (needs ``N``), counting measure for lattice functions."""
    if t < 0:
        raise InvalidParams("t must be non-negative")
    if isinstance(u, GridFunction1D):
        return float(sum(1 for v in u.values if abs(v) > t))
    if N is None:
        raise InvalidParams("radial functions need the dimension N")
    active = [R for R, h in zip(u.radii, u.heights) if h > t]
    return ball_volume(N, active[-1]) if active else 0.0


def lorentz_norm(u, N, q, r):
    """||u||_{q,r} = (q int_0^inf mu(t)^{r/q} t^{r-1} dt)^{1/r}, or
    sup_t mu(t)^{1/q} t when r is infinite."""
    q = float(q)
    r = float(r)
    if q < 1 or r < 1:
        raise InvalidParams("need q >= 1 and r >= 1")
    vols = [ball_volume(N, R) for R in u.radii]
    h = u.heights + (0.0,)
    if math.isinf(r):
        # mu(t) = V_k on [h_{k+1}, h_k); the sup is approached as t -> h_k
        return max(V ** (1.0 / q) * h[k] for k, V in enumerate(vols))
    total = sum(V ** (r / q) * (h[k] ** r - h[k + 1] ** r) for k, V in enumerate(vols))
    return (q * total / r) ** (1.0 / r)


def step_weighted_norm(u, N, s, p):
    """int u^p |x|^{-ps} dx over annuli, in closed form (requires N > ps)."""
    e = N - p * s
    if e <= 0:
        raise InvalidParams("the weighted norm of a step function needs N > ps")
    radii = (0.0,) + u.radii
    return sphere_area(N) / e * sum(
        hk ** p * (radii[k + 1] ** e - radii[k] ** e) for k, hk in enumerate(u.heights))


def symmdecr_identity_gap(params, u):
    """||u||_{p*,p} - (N/|S^{N-1}|)^{s/N} (int u^p |x|^{-ps})^{1/p}."""
    if not params.subcritical:
        raise InvalidParams("needs N > ps")
    N, s, p = params.N, params.s, params.p
    lhs = lorentz_norm(u, N, params.p_star, p)
    rhs = (N / sphere_area(N)) ** (s / N) * step_weighted_norm(u, N, s, p) ** (1.0 / p)
    return lhs - rhs


def lorentz_nesting_gap(u, N, q, p, r):
    """(q/r)^{1/r} (p/q)^{1/p} ||u||_{q,p} - ||u||_{q,r} for p < r <= inf."""
    if not p < r:
        raise InvalidParams("need p < r")
    lead = 1.0 if math.isinf(r) else (q / r) ** (1.0 / r)
    return lead * (p / q) ** (1.0 / p) * lorentz_norm(u, N, q, p) - lorentz_norm(u, N, q, r)


def gaussian_decomposition_gap(params, z, rel_tol=1e-12):
    """int_0^inf exp(-a z^2) a^{m-1} da - Gamma(m) z^{-2m}, m = (N + ps)/2.

    The integral is truncated where the remaining tail is below 1e-16 of
    the total, and the a -> 0 end is smoothed by a = sigma^{1/m}.
    """
    z = float(z)
    if z <= 0:
        raise InvalidParams("z must be positive")
    m = 0.5 * (params.N + params.ps)
    z2 = z * z
    # in x = a z^2 the tail beyond X is Gamma(m, X) ~ X^{m-1} e^{-X}
    X = 40.0
    while (X ** (m - 1.0)) * math.exp(-X) > 1e-17 * gamma_fn(m):
        X *= 1.25
    split = min(1.0, X)

    def near(sig):
        a = sig ** (1.0 / m)
        return np.exp(-a * z2) / m

    def far(a):
        return np.exp(-a * z2) * a ** (m - 1.0)

    amax = X / z2
    asplit = split / z2
    left = integrate_adaptive(near, 0.0, asplit ** m, rel_tol, 0.0, vectorized=True)
    right = integrate_adaptive(far, asplit, amax, rel_tol, 0.0, vectorized=True)
    return left.value + right.value - gamma_fn(m) * z ** (-2.0 * m)


def random_step_function(rng, layers=3, rmax=3.0):
    K = int(layers)
    radii = np.sort(rng.uniform(0.05, rmax, K))
    while np.any(np.diff(radii) <= 1e-3):
        radii = np.sort(rng.uniform(0.05, rmax, K))
    heights = np.sort(rng.uniform(0.1, 5.0, K))[::-1]
    while np.any(np.diff(heights) >= -1e-3):
        heights = np.sort(rng.uniform(0.1, 5.0, K))[::-1]
    return StepRadialFunction(tuple(radii), tuple(heights))
