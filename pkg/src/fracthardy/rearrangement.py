"""Symmetric decreasing rearrangement on the integer lattice and brute-force
checks of the rearrangement inequality

    sum_{i != j} J(u_i - u_j) k(|i - j|)  >=  same sum for u*

for convex J with J(0) = 0 and symmetric decreasing kernels k.

A GridFunction1D lives on the window {-M, ..., M}; outside it the function is
zero. By default energies are taken over all of Z: the interaction of each
window site with the zero exterior is summed exactly through kernel tails.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import InvalidParams

__all__ = [
    "GridFunction1D",
    "PowerKernel",
    "GeometricKernel",
    "rearrange",
    "lattice_energy",
    "lattice_energy_batch",
    "rearrangement_gap",
    "layer_cake_energy",
    "exhaustive_sweep",
    "placement_order",
    "J_ABS",
    "J_SQUARE",
    "J_CUBE",
    "J_ASYM",
]


@dataclass(frozen=True)
class GridFunction1D:
    """Non-negative values at sites -M..M (``values[k]`` sits at site k - M)."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) % 2 != 1:
            raise InvalidParams("need an odd number of values (sites -M..M)")
        if any(v < 0 or not math.isfinite(v) for v in vals):
            raise InvalidParams("values must be finite and non-negative")
        object.__setattr__(self, "values", vals)

    @property
    def support_radius(self):
        return len(self.values) // 2

    @property
    def sites(self):
        M = self.support_radius
        return range(-M, M + 1)

    def __getitem__(self, site):
        M = self.support_radius
        return self.values[site + M] if -M <= site <= M else 0.0

    def as_array(self):
        return np.array(self.values)

    @classmethod
    def from_sites(cls, mapping, M=None):
        """Build from {site: value}; the window is the smallest containing all sites."""
        if M is None:
            M = max((abs(k) for k in mapping), default=0)
        vals = [0.0] * (2 * M + 1)
        for k, v in mapping.items():
            vals[k + M] = v
        return cls(tuple(vals))

    def padded(self, W):
        M = self.support_radius
        if W < M:
            raise InvalidParams("cannot shrink the window")
        return GridFunction1D((0.0,) * (W - M) + self.values + (0.0,) * (W - M))

    def translated(self, shift):
        """Translate by ``shift`` sites, enlarging the window as needed."""
        M = self.support_radius
        W = M + abs(shift)
        vals = [0.0] * (2 * W + 1)
        for k in range(-M, M + 1):
            vals[k + shift + W] = self[k]
        return GridFunction1D(tuple(vals))


class PowerKernel:
    """k(d) = d^{-exponent}, exponent > 1 so that it is summable."""

    def __init__(self, exponent):
        if exponent <= 1:
            raise InvalidParams("power kernel needs exponent > 1")
        self.exponent = float(exponent)

    def __call__(self, d):
        return np.asarray(d, dtype=float) ** (-self.exponent)

    def tail(self, m):
        """sum_{d > m} k(d)."""
        return zeta(self.exponent, np.asarray(m, dtype=float) + 1.0)

    def __repr__(self):
        return f"PowerKernel({self.exponent:g})"


class GeometricKernel:
    """k(d) = ratio^d with 0 < ratio < 1."""

    def __init__(self, ratio):
        if not 0 < ratio < 1:
            raise InvalidParams("geometric kernel needs 0 < ratio < 1")
        self.ratio = float(ratio)

    def __call__(self, d):
        return self.ratio ** np.asarray(d, dtype=float)

    def tail(self, m):
        return self.ratio ** (np.asarray(m, dtype=float) + 1.0) / (1.0 - self.ratio)

    def __repr__(self):
        return f"GeometricKernel({self.ratio:g})"


_TAIL_CUTOFF = 10 ** 6


def _tail(kernel, m):
    if hasattr(kernel, "tail"):
        return np.asarray(kernel.tail(m), dtype=float)
    # plain callables: direct summation up to a fixed cutoff distance
    d = np.arange(1, _TAIL_CUTOFF + 1, dtype=float)
    cum = np.cumsum(np.asarray(kernel(d), dtype=float)[::-1])[::-1]
    m = np.asarray(m, dtype=int)
    return np.where(m < _TAIL_CUTOFF, cum[np.minimum(m, _TAIL_CUTOFF - 1)], 0.0)


def J_ABS(t):
    return np.abs(t)


def J_SQUARE(t):
    return np.square(t)


def J_CUBE(t):
    return np.abs(t) ** 3


def J_ASYM(t):
    # t_+ + 2 t_-: convex, J(0) = 0, not even
    return np.maximum(t, 0.0) + 2.0 * np.maximum(-t, 0.0)


def placement_order(M):
    """Sites 0, 1, -1, 2, -2, ..., M, -M."""
    out = [0]
    for k in range(1, M + 1):
        out += [k, -k]
    return out


def rearrange(u):
    """Symmetric decreasing rearrangement: the largest value goes to site 0,
    then 1, -1, 2, -2, ..."""
    M = u.support_radius
    vals = sorted(u.values, reverse=True)
    out = [0.0] * (2 * M + 1)
    for site, v in zip(placement_order(M), vals):
        out[site + M] = v
    return GridFunction1D(tuple(out))


def lattice_energy_batch(values, kernel, J, window=None):
    """Energies of many functions at once; ``values`` has shape (m, 2M+1)."""
    vals = np.atleast_2d(np.asarray(values, dtype=float))
    M = vals.shape[1] // 2
    if window is not None:
        W = int(window)
        if W < M:
            raise InvalidParams("window smaller than the support radius")
        vals = np.pad(vals, ((0, 0), (W - M, W - M)))
        M = W
    idx = np.arange(-M, M + 1)
    dist = np.abs(idx[:, None] - idx[None, :])
    off = dist > 0
    kmat = np.zeros(dist.shape)
    kmat[off] = kernel(dist[off])
    diffs = vals[:, :, None] - vals[:, None, :]
    inside = np.sum(J(diffs) * kmat[None], axis=(1, 2))
    if window is not None:
        return inside
    zero = np.zeros(1)
    jt = J(vals) + J(-vals) - 2.0 * J(zero)[0]
    tails = _tail(kernel, M - idx) + _tail(kernel, M + idx)
    return inside + jt @ tails


def lattice_energy(u, kernel, J, window=None):
    """sum_{i != j} J(u_i - u_j) k(|i - j|).

    With ``window=None`` the sum runs over all of Z. With an integer
    ``window`` W only sites in {-W, ..., W} take part.
    """
    return float(lattice_energy_batch(u.as_array()[None], kernel, J, window)[0])


def rearrangement_gap(u, kernel, J, window=None):
    return lattice_energy(u, kernel, J, window) - lattice_energy(rearrange(u), kernel, J, window)


def layer_cake_energy(u, kernel, window=None):
    """The J(t) = |t| energy rebuilt from level sets: sum over consecutive
    distinct levels l_{k-1} < l_k of (l_k - l_{k-1}) * E[chi_{u > l_{k-1}}]."""
    vals = u.as_array()
    levels = np.unique(np.concatenate([[0.0], vals]))
    total = 0.0
    for lo, hi in zip(levels[:-1], levels[1:]):
        chi = (vals > lo).astype(float)
        total += (hi - lo) * float(lattice_energy_batch(chi[None], kernel, J_ABS, window)[0])
    return total


def exhaustive_sweep(M, maxval, kernel, J, chunk=4096):
    """Rearrangement gaps for every function on {-M..M} with values in
    {0, ..., maxval}. Returns (number of non-negative gaps, total, min gap)."""
    width = 2 * M + 1
    combos = np.array(list(itertools.product(range(maxval + 1), repeat=width)), dtype=float)
    order = np.array(placement_order(M)) + M
    rearr = np.zeros_like(combos)
    rearr[:, order] = -np.sort(-combos, axis=1)
    nonneg = 0
    gmin = math.inf
    for start in range(0, len(combos), chunk):
        a = lattice_energy_batch(combos[start:start + chunk], kernel, J)
        b = lattice_energy_batch(rearr[start:start + chunk], kernel, J)
        gap = a - b
        scale = np.maximum(np.abs(a), 1.0)
        nonneg += int(np.sum(gap >= -1e-12 * scale))
        gmin = min(gmin, float(np.min(gap)))
    return nonneg, len(combos), gmin
