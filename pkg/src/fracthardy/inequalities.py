"""Residuals of the elementary convexity inequalities behind the ground
state representation.

Each function returns ``lhs - rhs`` of an inequality that should be
non-negative. All of them broadcast over numpy arrays, so sweeps of 10^5
samples are a single call.
"""

import numpy as np

from .constants import remainder_constant, remainder_objective
from .errors import DimensionMismatch, InvalidParams

__all__ = [
    "residual_numbers",
    "residual_numbers_improved",
    "residual_convexity",
    "boundary_profile",
    "remainder_constant_batch",
]


def residual_numbers(a, t, p):
    """|a - t|^p - (1 - t)^{p-1} (|a|^p - t) for complex ``a``, 0 <= t <= 1."""
    a = np.asarray(a)
    t = np.asarray(t, dtype=float)
    return np.abs(a - t) ** p - (1.0 - t) ** (p - 1.0) * (np.abs(a) ** p - t)


def _cp(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 2.0):
        raise InvalidParams("the improved inequality needs p >= 2")
    if p_arr.ndim == 0:
        return remainder_constant(float(p_arr))
    return remainder_constant_batch(p_arr)


def remainder_constant_batch(p, tol=1e-12):
    """c_p for an array of exponents, by golden-section search run in lockstep."""
    p = np.asarray(p, dtype=float)
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    lo = np.zeros_like(p)
    hi = np.full_like(p, 0.5)
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = remainder_objective(x1, p)
    f2 = remainder_objective(x2, p)
    while np.max(hi - lo) > tol:
        left = f1 <= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx1 = np.where(left, hi - invphi * (hi - lo), x2)
        nx2 = np.where(left, x1, lo + invphi * (hi - lo))
        nf1 = np.where(left, remainder_objective(nx1, p), f2)
        nf2 = np.where(left, f1, remainder_objective(nx2, p))
        x1, x2, f1, f2 = nx1, nx2, nf1, nf2
    out = np.minimum(np.minimum(f1, f2), remainder_objective(0.5 * (lo + hi), p))
    return np.where(p == 2.0, 1.0, out)


def residual_numbers_improved(a, t, p, c_p=None):
    """Residual of the improved inequality with remainder c_p t^{p/2} |a - 1|^p.

    ``c_p`` may be passed to skip recomputing the minimisation.
    """
    if c_p is None:
        c_p = _cp(p)
    a = np.asarray(a)
    t = np.asarray(t, dtype=float)
    return residual_numbers(a, t, p) - c_p * t ** (p / 2.0) * np.abs(a - 1.0) ** p


def residual_convexity(a, b, p, with_remainder=False, c_p=None):
    """|a+b|^p - |a|^p - p |a|^{p-2} Re<a, b> (- c_p |b|^p) for vectors a, b.

    Vectors are taken along the last axis, so stacks of vectors broadcast.
    The middle term is 0 when a = 0.
    """
    a = np.atleast_1d(np.asarray(a))
    b = np.atleast_1d(np.asarray(b))
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatch(f"length {a.shape[-1]} != {b.shape[-1]}")
    if with_remainder and p < 2:
        raise InvalidParams("the remainder form needs p >= 2")
    na = np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))
    nb = np.sqrt(np.sum(np.abs(b) ** 2, axis=-1))
    nab = np.sqrt(np.sum(np.abs(a + b) ** 2, axis=-1))
    inner = np.real(np.sum(np.conj(a) * b, axis=-1))
    if p == 2.0:
        lin = 2.0 * inner
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            lin = np.where(na > 0, p * na ** (p - 2.0) * inner, 0.0)
    res = nab ** p - na ** p - lin
    if with_remainder:
        if c_p is None:
            c_p = remainder_constant(p)
        res = res - c_p * nb ** p
    return res if np.ndim(res) else float(res)


def boundary_profile(tau, p):
    """|1 - tau|^p - tau^p + p tau^{p-1}, the limit of the remainder ratio
    as a -> 1 and t -> 1 with 1 - t = tau (1 - a)."""
    tau = np.asarray(tau, dtype=float)
    out = np.abs(1.0 - tau) ** p - tau ** p + p * tau ** (p - 1.0)
    return out if out.ndim else float(out)
