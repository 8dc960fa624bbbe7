"""Sharp constants: the fractional Hardy constant by three routes, the
remainder constant c_p and the Sobolev-Lorentz embedding prefactor.

The angular kernel is

    Phi(r) = |S^{N-2}| * int_0^pi sin^{N-2}(t) / (1 - 2 r cos t + r^2)^{(N+ps)/2} dt

for N >= 2 and ``(1-r)^{-1-ps} + (1+r)^{-1-ps}`` for N = 1. It blows up like
``(1-r)^{-1-ps}`` at r = 1, so internally everything is expressed through the
complement ``q = 1 - r`` and the bounded product ``q^{1+ps} Phi(1-q)``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, OutOfDomain
from .numerics import gamma_fn, integrate_adaptive, minimize_scalar, sphere_area
from .params import HardyParams

__all__ = [
    "Method",
    "ConstantReport",
    "phi_kernel",
    "phi_scaled",
    "hardy_constant",
    "hardy_constant_p2",
    "hardy_constant_p1n1",
    "hardy_constant_crosscheck",
    "remainder_constant",
    "remainder_objective",
    "embedding_constant",
]


class Method(str, enum.Enum):
    ONE_DIM_INTEGRAL = "OneDimIntegral"
    CLOSED_FORM_P2 = "ClosedFormP2"
    CLOSED_FORM_P1N1 = "ClosedFormP1N1"
    RADIAL_DOUBLE_INTEGRAL = "RadialDoubleIntegral"


@dataclass(frozen=True)
class ConstantReport:
    params: HardyParams
    value: float
    method: Method
    error_estimate: float = 0.0


# Gauss-Legendre panels for the angular integral
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)
_GRADE = 4.0


def phi_scaled(N, ps, q):
    """Return ``q^{1+ps} * Phi(1 - q)`` for ``q`` in (0, 1], vectorised.

    For N >= 2 the angular integral is split into panels
    ``[0, q], [q, 4q], [4q, 16q], ...`` capped at pi, so that each panel
    resolves the peak of width ~q at t = 0; 20-point Gauss-Legendre on each
    panel is then accurate to about machine precision.
    """
    q = np.asarray(q, dtype=float)
    shape = q.shape
    q = q.ravel()
    a = 1.0 + ps
    if N == 1:
        # (1-r)^{-a} + (1+r)^{-a}, scaled by q^a
        out = 1.0 + (q / (2.0 - q)) ** a
        return out.reshape(shape)
    out = np.empty_like(q)
    if q.size == 0:
        return out.reshape(shape)
    # group abscissae by panel count so tiny q does not inflate every row
    npan = np.maximum(1, np.ceil(np.log(math.pi / q) / math.log(_GRADE)).astype(int) + 1)
    for n in np.unique(npan):
        idx = np.flatnonzero(npan == n)
        step = max(1, _CHUNK // (n * _GL_X.size))
        for start in range(0, idx.size, step):
            sel = idx[start:start + step]
            out[sel] = _phi_panels(N, ps, q[sel], int(n))
    return out.reshape(shape)


_CHUNK = 1 << 20


def _phi_panels(N, ps, q, npan):
    a = 1.0 + ps
    r = 1.0 - q
    k = np.arange(npan + 1, dtype=float)
    # edges: 0, q, 4q, ..., clipped at pi
    edges = np.minimum(q[:, None] * _GRADE ** np.maximum(k - 1.0, 0.0)[None, :], math.pi)
    edges[:, 0] = 0.0
    edges[:, -1] = math.pi
    lo = edges[:, :-1]
    hi = edges[:, 1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, :, None] + half[:, :, None] * _GL_X[None, None, :]
    sh = np.sin(0.5 * t)
    # log(q^2 + 4 r sin^2(t/2)) without underflow of q^2 for tiny q
    logq = np.log(q)[:, None, None]
    with np.errstate(divide="ignore"):
        # r = 0 gives log 0 = -inf, which logaddexp handles exactly
        logD = np.logaddexp(2.0 * logq, np.log(4.0 * r[:, None, None]) + 2.0 * np.log(sh))
    logf = a * logq - 0.5 * (N + ps) * logD
    if N > 2:
        logf = logf + (N - 2) * np.log(np.sin(t))
    vals = np.exp(logf)
    integral = np.sum(half[:, :, None] * vals * _GL_W[None, None, :], axis=(1, 2))
    return sphere_area(N - 1) * integral


def phi_kernel(params, r):
    """The angular kernel Phi_{N,s,p}(r) for 0 <= r < 1."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0) or np.any(r_arr >= 1.0) or not np.all(np.isfinite(r_arr)):
        raise OutOfDomain(f"Phi is defined for 0 <= r < 1, got {r!r}")
    q = 1.0 - r_arr
    out = phi_scaled(params.N, params.ps, q) / q ** (1.0 + params.ps)
    return float(out) if out.ndim == 0 else out


def _one_minus_pow_over_q(alpha, q):
    # |1 - (1-q)^alpha| / q without cancellation
    return np.abs(np.expm1(alpha * np.log1p(-q))) / q


def hardy_constant(params, rel_tol=1e-10):
    """C_{N,s,p} = 2 int_0^1 r^{ps-1} |1 - r^alpha|^p Phi(r) dr.

    The range is split at r = 1/2. Near r = 0 the substitution r = sigma^{1/g}
    absorbs the power r^{g-1} (g = ps when N > ps, g = N otherwise); near r = 1
    the substitution 1 - r = xi^{1/kappa}, kappa = p(1-s), absorbs the
    (1-r)^{kappa-1} behaviour of the integrand.
    """
    N, s, p, alpha = params.N, params.s, params.p, params.alpha
    ps = params.ps

    g = ps if alpha > 0 else float(N)

    def left(sig):
        r = sig ** (1.0 / g)
        if alpha > 0:
            core = np.abs(1.0 - r ** alpha) ** p
        else:
            core = np.abs(r ** (-alpha) - 1.0) ** p
        q = 1.0 - r
        return core * phi_scaled(N, ps, q) / q ** (1.0 + ps) / g

    kappa = p * (1.0 - s)

    def right(xi):
        q = xi ** (1.0 / kappa)
        r = 1.0 - q
        return (r ** (ps - 1.0) * _one_minus_pow_over_q(alpha, q) ** p
                * phi_scaled(N, ps, q) / kappa)

    a = integrate_adaptive(left, 0.0, 0.5 ** g, rel_tol, 0.0, vectorized=True)
    b = integrate_adaptive(right, 0.0, 0.5 ** kappa, rel_tol, 0.0, vectorized=True)
    return ConstantReport(params, 2.0 * (a.value + b.value), Method.ONE_DIM_INTEGRAL,
                          2.0 * (a.error_estimate + b.error_estimate))


def hardy_constant_p2(params):
    """Closed form of C_{N,s,2}:

        2 pi^{N/2} Gamma((N+2s)/4)^2 / Gamma((N-2s)/4)^2 * |Gamma(-s)| / Gamma((N+2s)/2)
    """
    if params.p != 2.0:
        raise InvalidParams("closed form requires p = 2")
    N, s = params.N, params.s
    return (2.0 * math.pi ** (N / 2.0)
            * gamma_fn((N + 2 * s) / 4.0) ** 2 / gamma_fn((N - 2 * s) / 4.0) ** 2
            * abs(gamma_fn(-s)) / gamma_fn((N + 2 * s) / 2.0))


def hardy_constant_p1n1(params):
    """Closed form C_{1,s,1} = 2^{2-s}/s."""
    if params.N != 1 or params.p != 1.0:
        raise InvalidParams("closed form requires N = 1 and p = 1")
    return 2.0 ** (2.0 - params.s) / params.s


def hardy_constant_crosscheck(params, rel_tol=1e-8):
    """C_{N,s,p} from the double integral over |x| < 1 < |y|.

    After integrating out the angles,

        C = 2 |alpha| int_0^1 dw w^{ps-1} int_0^1 drho rho^{N-1}
                |rho^{-alpha} - w^alpha|^{p-1} Phi(rho w)

    where ``|y| = 1/w`` and ``|x| = rho``. Both levels are adaptive; the
    corner rho = w = 1, where Phi is singular, is handled by endpoint
    substitutions in w and geometrically graded breakpoints in rho.
    """
    N, s, p, alpha = params.N, params.s, params.p, params.alpha
    ps = params.ps
    inner_tol = 0.1 * rel_tol
    neg = alpha < 0

    # rho -> 0 behaves like rho^{e1 - 1}
    e1 = min(1.0, N - max(alpha, 0.0) * (p - 1.0))

    def h_pow(rho, w):
        # |rho^{-alpha} - w^alpha|^{p-1}, divided by w^{alpha(p-1)} when alpha < 0
        if p == 1.0:
            return 1.0
        if neg:
            return np.abs((rho * w) ** (-alpha) - 1.0) ** (p - 1.0)
        return np.abs(rho ** (-alpha) - w ** alpha) ** (p - 1.0)

    def h_pow_near(u, log_w):
        # same as h_pow with rho = 1 - u, written to avoid cancellation
        if p == 1.0:
            return 1.0
        lu = np.log1p(-u)
        if neg:
            return np.abs(np.expm1(-alpha * (lu + log_w))) ** (p - 1.0)
        return np.abs(np.expm1(-alpha * lu) - np.expm1(alpha * log_w)) ** (p - 1.0)

    def H(w, delta):
        # delta = 1 - w, passed separately to keep precision near w = 1
        log_w = math.log1p(-delta)

        def lower(sig):
            rho = sig ** (1.0 / e1)
            q = 1.0 - rho * w
            return (rho ** (N - e1) * h_pow(rho, w)
                    * phi_scaled(N, ps, q) / q ** (1.0 + ps) / e1)

        def upper(u):
            rho = 1.0 - u
            q = u + rho * delta
            return (rho ** (N - 1) * h_pow_near(u, log_w)
                    * phi_scaled(N, ps, q) / q ** (1.0 + ps))

        pts = []
        b = delta
        while b < 0.5:
            pts.append(b)
            b *= 4.0
        lo = integrate_adaptive(lower, 0.0, 0.5 ** e1, inner_tol, 0.0, vectorized=True)
        hi = integrate_adaptive(upper, 0.0, 0.5, inner_tol, 0.0, points=pts, vectorized=True)
        return lo.value + hi.value

    # outer w in (0, 1/2): w^{ps-1} w^{min(alpha,0)(p-1)} H(w) ~ w^{e0-1}
    e0 = ps + min(alpha, 0.0) * (p - 1.0)

    def outer_left(sig):
        out = np.empty_like(sig)
        for idx, sg in np.ndenumerate(sig):
            w = sg ** (1.0 / e0)
            out[idx] = H(w, 1.0 - w) / e0
        return out

    # H(w) ~ H(1) + c (1-w)^{p(1-s)-1}; a substitution exponent above 1 would
    # turn the regular part into an endpoint singularity
    kappa = min(1.0, p * (1.0 - s))

    def outer_right(xi):
        out = np.empty_like(xi)
        for idx, x in np.ndenumerate(xi):
            delta = x ** (1.0 / kappa)
            w = 1.0 - delta
            scale = w ** (ps - 1.0) * (w ** (alpha * (p - 1.0)) if neg else 1.0)
            out[idx] = delta ** (1.0 - kappa) * scale * H(w, delta) / kappa
        return out

    a = integrate_adaptive(outer_left, 0.0, 0.5 ** e0, rel_tol, 0.0, vectorized=True)
    b = integrate_adaptive(outer_right, 0.0, 0.5 ** kappa, rel_tol, 0.0, vectorized=True)
    fac = 2.0 * abs(alpha)
    return ConstantReport(params, fac * (a.value + b.value), Method.RADIAL_DOUBLE_INTEGRAL,
                          fac * (a.error_estimate + b.error_estimate))


def remainder_objective(tau, p):
    return (1.0 - tau) ** p - tau ** p + p * tau ** (p - 1.0)


def remainder_constant(p):
    """c_p = min over 0 < tau < 1/2 of (1-tau)^p - tau^p + p tau^{p-1}."""
    p = float(p)
    if not p >= 2.0:
        raise InvalidParams(f"c_p is defined for p >= 2, got {p}")
    if p == 2.0:
        return 1.0
    _, val = minimize_scalar(lambda t: remainder_objective(t, p), 0.0, 0.5, 1e-12)
    return val


def embedding_constant(params, r=None, C=None):
    """Prefactor of the sharp embedding of the fractional Sobolev space into
    the Lorentz space L_{p*, r}, for p <= r <= inf (``r=None`` means r = p).

    ``C`` may be supplied to reuse a previously computed Hardy constant.
    """
    if not params.subcritical:
        raise InvalidParams("the embedding requires N > ps")
    N, s, p = params.N, params.s, params.p
    if r is None:
        r = p
    r = float(r)
    if r < p:
        raise InvalidParams(f"need r >= p, got r={r}, p={p}")
    if C is None:
        C = hardy_constant(params).value
    base = (N / sphere_area(N)) ** (s / N) * C ** (-1.0 / p)
    if r == p:
        return base
    pst = params.p_star
    lead = 1.0 if math.isinf(r) else (pst / r) ** (1.0 / r)
    return lead * (p / pst) ** (1.0 / p) * base
