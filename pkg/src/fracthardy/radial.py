"""Fractional seminorms, Hardy quotients and remainder terms of radial
functions.

For radial u the angular integrations collapse and

    E[u] = 2 |S^{N-1}| int_0^1 w^{N-1} Phi(w) G(w) dw,
    G(w) = int_0^inf r^{N-1-ps} |u(r) - u(rw)|^p dr.

G is evaluated for each outer node w on the subintervals cut out by the
breakpoints r_k and r_k / w. On each subinterval both u(r) and u(rw) are
finite sums of powers of r. When the difference collapses to a single power
the r-integral is done in closed form (this covers every step function);
otherwise it is integrated adaptively in log r. The singularity of Phi at
w = 1 is absorbed by 1 - w = xi^{1/kappa} with kappa = 1 - ps when u jumps
somewhere and kappa = p(1 - s) when u is continuous.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .constants import hardy_constant, phi_scaled, remainder_constant
from .errors import InvalidParams, UnboundedSupport, ZeroDenominator
from .numerics import QuadResult, integrate_adaptive, sphere_area

__all__ = [
    "RadialPiecewisePower",
    "radial_energy",
    "weighted_norm",
    "rayleigh_quotient",
    "trial_function",
    "sharpness_scan",
    "SharpnessTerms",
    "sharpness_terms",
    "remainder_check",
    "remainder_energy",
    "isoperimetric_check",
    "step_function",
    "read_radial_file",
]

OUTER_TOL = 1e-7
INNER_TOL = 1e-8

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class RadialPiecewisePower:
    """u(r) = c r^{-beta} + d on [r_{k-1}, r_k), zero for r >= r_K.

    ``breakpoints`` starts at 0; ``pieces`` holds one (c, beta, d) per interval.
    """

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        br = tuple(float(b) for b in self.breakpoints)
        pcs = tuple(tuple(float(x) for x in pc) for pc in self.pieces)
        if not br or br[0] != 0.0:
            raise InvalidParams("breakpoints must start at 0")
        if not all(math.isfinite(b) for b in br):
            raise UnboundedSupport("breakpoints must be finite")
        if any(b <= a for a, b in zip(br, br[1:])):
            raise InvalidParams("breakpoints must be strictly increasing")
        if len(pcs) != len(br) - 1 or any(len(pc) != 3 for pc in pcs):
            raise InvalidParams("need one (c, beta, d) piece per interval")
        if not all(math.isfinite(x) for pc in pcs for x in pc):
            raise InvalidParams("piece coefficients must be finite")
        if pcs and pcs[0][0] != 0.0 and pcs[0][1] > 0.0:
            raise InvalidParams("the piece touching r = 0 must be bounded")
        object.__setattr__(self, "breakpoints", br)
        object.__setattr__(self, "pieces", pcs)

    @property
    def K(self):
        return len(self.pieces)

    @property
    def support_radius(self):
        return self.breakpoints[-1]

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for k, (c, beta, d) in enumerate(self.pieces):
            lo, hi = self.breakpoints[k], self.breakpoints[k + 1]
            m = (r >= lo) & (r < hi)
            if c != 0.0:
                out[m] = c * r[m] ** (-beta) + d
            else:
                out[m] = d
        return out if out.ndim else float(out)

    def scaled(self, lam):
        """r -> u(r / lam)."""
        pcs = tuple((c * lam ** beta, beta, d) for c, beta, d in self.pieces)
        return RadialPiecewisePower(tuple(lam * b for b in self.breakpoints), pcs)

    def terms(self, k, shift=0.0):
        """Piece k as {exponent: coefficient}, times r^shift; k = K is zero."""
        if k >= self.K:
            return {}
        c, beta, d = self.pieces[k]
        out = {}
        if c != 0.0:
            out[shift - beta] = out.get(shift - beta, 0.0) + c
        if d != 0.0:
            out[shift] = out.get(shift, 0.0) + d
        return {e: a for e, a in out.items() if a != 0.0}

    def has_jump(self):
        """True when u is discontinuous at some breakpoint r_1..r_K."""
        for k in range(1, self.K + 1):
            r = self.breakpoints[k]
            lt, rt = self.terms(k - 1), self.terms(k)
            left, right = _eval_terms(lt, r), _eval_terms(rt, r)
            # compare against the term sizes, since both sides may cancel to ~0
            scale = max(sum(abs(a) * r ** e for e, a in t.items()) for t in (lt, rt))
            scale = max(scale, 1e-300)
            if abs(left - right) > 1e-9 * scale:
                return True
        return False


def _eval_terms(terms, r):
    return sum(a * r ** e for e, a in terms.items())


def step_function(radii, heights):
    """Radial step function equal to heights[k] on [radii[k-1], radii[k])."""
    if len(radii) != len(heights):
        raise InvalidParams("radii and heights differ in length")
    return RadialPiecewisePower((0.0,) + tuple(radii), tuple((0.0, 0.0, h) for h in heights))


# ---------------------------------------------------------------------------
# one-dimensional pieces


def _power_integral(t, logA, L):
    """int_A^B r^{t-1} dr with log A and L = log(B/A) given (A > 0)."""
    if abs(t * L) < 1e-300 or t == 0.0:
        return math.exp(t * logA) * L
    return math.exp(t * logA) * math.expm1(t * L) / t


def _segment(terms, mu, p, A, logA, L, B, tol):
    """int_A^B r^mu |sum a r^e|^p dr. A = 0 is allowed; otherwise log A and
    L = log(B/A) are passed explicitly to keep short intervals exact."""
    if not terms:
        return 0.0
    exps = np.array(list(terms.keys()))
    coefs = np.array(list(terms.values()))
    if len(terms) == 1:
        a, e = float(coefs[0]), float(exps[0])
        t = mu + 1.0 + p * e
        if A == 0.0:
            if t <= 0.0:
                raise InvalidParams("integral diverges at r = 0")
            return abs(a) ** p * B ** t / t
        return abs(a) ** p * _power_integral(t, logA, L)

    if A == 0.0:
        g = mu + 1.0 + p * float(exps.min())
        if g <= 0.0:
            raise InvalidParams("integral diverges at r = 0")

        def f(sig):
            r = B * sig ** (1.0 / g)
            val = np.abs(np.sum(coefs * r[..., None] ** exps, axis=-1)) ** p
            return r ** (mu + 1.0) * val / (g * sig)

        return integrate_adaptive(f, 0.0, 1.0, tol, 0.0, vectorized=True).value

    def h(x):
        lr = logA + x
        val = np.abs(np.sum(coefs * np.exp(exps * lr[..., None]), axis=-1)) ** p
        return np.exp((mu + 1.0) * lr) * val

    if L < 1e-3:
        xs = 0.5 * L * (_GL_X + 1.0)
        return 0.5 * L * float(np.dot(_GL_W, h(xs)))
    return integrate_adaptive(h, 0.0, L, tol, 0.0, vectorized=True).value


# ---------------------------------------------------------------------------
# the reduced double integral


class _Profile:
    """A piecewise-power profile f with its pieces as power sums."""

    def __init__(self, u, shift=0.0):
        self.u = u
        self.R = u.breakpoints[1:]
        self.logR = [math.log(r) for r in self.R]
        self.terms = [u.terms(k, shift) for k in range(u.K + 1)]

    def G(self, w, log_w, mu, p, tol):
        """int_0^inf r^mu |f(r) - f(rw)|^p dr; log w is passed for precision.

        Cut points are kept as (log r_k, offset) with offset 0 or -log w, so
        the gap between r_k and r_k / w stays exact even when w rounds to 1.
        """
        off = -log_w
        if off <= 0.0:
            return 0.0
        cuts = [(lr, 0.0) for lr in self.logR] + [(lr, off) for lr in self.logR]
        cuts.sort(key=functools.cmp_to_key(
            lambda a, b: (a[0] - b[0]) + (a[1] - b[1])))
        total = 0.0
        i = j = 0
        prev = None
        for cut in cuts:
            # on the open interval before this cut r lies in piece i, rw in piece j
            if prev is None:
                L = None
            else:
                L = (cut[0] - prev[0]) + (cut[1] - prev[1])
            if (prev is None or L > 0.0) and (i != j or i < self.u.K):
                total += self._piece(i, j, log_w, mu, p, prev, L, cut, tol)
            if cut[1] == 0.0:
                i += 1
            else:
                j += 1
            prev = cut
            if j == self.u.K:
                break
        return total

    def _piece(self, i, j, log_w, mu, p, prev, L, cut, tol):
        diff = dict(self.terms[i])
        same = i == j
        for e, a in self.terms[j].items():
            if same:
                # a r^e - a (rw)^e without cancellation
                diff[e] = -a * math.expm1(e * log_w)
            else:
                diff[e] = diff.get(e, 0.0) - a * math.exp(e * log_w)
            if same and e == 0.0:
                diff[e] = 0.0
        scale = max((abs(a) for a in diff.values()), default=0.0)
        diff = {e: a for e, a in diff.items()
                if abs(a) > 1e-300 and abs(a) > 4e-16 * scale * (not same)}
        B = math.exp(cut[0] + cut[1])
        if prev is None:
            return _segment(diff, mu, p, 0.0, None, None, B, tol)
        logA = prev[0] + prev[1]
        return _segment(diff, mu, p, math.exp(logA), logA, L, B, tol)


def _ratio_points(u):
    R = u.breakpoints[1:]
    return sorted({a / b for a in R for b in R if a < b})


def _double_integral(params, prof, mu, lam, g0, kappa, rel_tol, inner_tol):
    """2 |S^{N-1}| int_0^1 w^lam Phi(w) G(w) dw, G built with measure r^mu dr."""
    N, ps, p = params.N, params.ps, params.p
    ratios = _ratio_points(prof.u)

    def left(sig):
        out = np.empty_like(sig)
        w = sig ** (1.0 / g0)
        phi = phi_scaled(N, ps, 1.0 - w) / (1.0 - w) ** (1.0 + ps)
        for idx in np.ndindex(sig.shape):
            wi = float(w[idx])
            if wi <= 0.0:
                out[idx] = 0.0
                continue
            G = prof.G(wi, math.log(sig[idx]) / g0, mu, p, inner_tol)
            out[idx] = wi ** (lam + 1.0) * phi[idx] * G / (g0 * sig[idx])
        return out

    def right(xi):
        out = np.empty_like(xi)
        delta = xi ** (1.0 / kappa)
        phis = phi_scaled(N, ps, delta)
        for idx in np.ndindex(xi.shape):
            d = float(delta[idx])
            if d == 0.0:
                out[idx] = 0.0
                continue
            w = 1.0 - d
            G = prof.G(w, math.log1p(-d), mu, p, inner_tol)
            out[idx] = w ** lam * phis[idx] * G * d ** (-kappa - ps) / kappa
        return out

    lpts = [r ** g0 for r in ratios if r < 0.5]
    rpts = [(1.0 - r) ** kappa for r in ratios if r > 0.5]
    a = integrate_adaptive(left, 0.0, 0.5 ** g0, rel_tol, 0.0, points=lpts, vectorized=True)
    b = integrate_adaptive(right, 0.0, 0.5 ** kappa, rel_tol, 0.0, points=rpts, vectorized=True)
    fac = 2.0 * sphere_area(N)
    return QuadResult(fac * (a.value + b.value), fac * (a.error_estimate + b.error_estimate),
                      a.evaluations + b.evaluations)


def _kappa(params, u):
    if u.has_jump():
        k = 1.0 - params.ps
        if k <= 0.0:
            raise InvalidParams("u jumps and ps >= 1: the seminorm is infinite")
        return k
    return params.p * (1.0 - params.s)


def radial_energy(params, u, rel_tol=OUTER_TOL, inner_tol=INNER_TOL):
    """The fractional seminorm iint |u(x)-u(y)|^p |x-y|^{-N-ps} dx dy."""
    N, ps = params.N, params.ps
    mu = N - 1.0 - ps
    lam = N - 1.0
    g0 = ps if N > ps else float(N)
    prof = _Profile(u)
    return _double_integral(params, prof, mu, lam, g0, _kappa(params, u), rel_tol, inner_tol)


def weighted_norm(params, u, rel_tol=INNER_TOL):
    """int |u|^p |x|^{-ps} dx for a radial piecewise-power u."""
    N, ps, p = params.N, params.ps, params.p
    mu = N - 1.0 - ps
    br = u.breakpoints
    total = 0.0
    for k in range(u.K):
        A, B = br[k], br[k + 1]
        if A == 0.0:
            total += _segment(u.terms(k), mu, p, 0.0, None, None, B, rel_tol)
        else:
            total += _segment(u.terms(k), mu, p, A, math.log(A), math.log(B / A), B, rel_tol)
    return QuadResult(sphere_area(N) * total, 0.0, 0)


def rayleigh_quotient(params, u, rel_tol=OUTER_TOL):
    den = weighted_norm(params, u).value
    if den == 0.0:
        raise ZeroDenominator("weighted norm of u vanishes")
    return radial_energy(params, u, rel_tol).value / den


def remainder_energy(params, u, rel_tol=OUTER_TOL, inner_tol=INNER_TOL):
    """iint |v(x)-v(y)|^p |x-y|^{-N-ps} (|x||y|)^{-(N-ps)/2} dx dy with
    v = |x|^{(N-ps)/p} u. In the reduced form the r-measure becomes dr/r."""
    N, ps = params.N, params.ps
    gamma = -0.5 * (N - ps)
    lam = N - 1.0 + gamma
    prof = _Profile(u, shift=params.alpha)
    return _double_integral(params, prof, -1.0, lam, lam + 1.0, _kappa(params, u),
                            rel_tol, inner_tol)


def remainder_check(params, u, C=None, c_p=None, rel_tol=OUTER_TOL):
    """Returns (E[u] - C int |u|^p |x|^{-ps}, c_p * remainder energy)."""
    if params.p < 2:
        raise InvalidParams("the remainder inequality needs p >= 2")
    if C is None:
        C = hardy_constant(params).value
    if c_p is None:
        c_p = remainder_constant(params.p)
    lhs = radial_energy(params, u, rel_tol).value - C * weighted_norm(params, u).value
    return lhs, c_p * remainder_energy(params, u, rel_tol).value


def isoperimetric_check(params, R=1.0, C=None, rel_tol=OUTER_TOL):
    """(|B_R|^{(N-s)/N}, 2(N-s)/(N C) (N/|S|)^{s/N} iint_{B_R x B_R^c} |x-y|^{-N-s})."""
    if params.p != 1.0:
        raise InvalidParams("the isoperimetric form needs p = 1")
    N, s = params.N, params.s
    if C is None:
        C = hardy_constant(params).value
    S = sphere_area(N)
    ball = S * R ** N / N
    lhs = ball ** ((N - s) / N)
    # each ordered pair (B, B^c) and (B^c, B) appears once in the energy
    cross = 0.5 * radial_energy(params, step_function((R,), (1.0,)), rel_tol).value
    rhs = 2.0 * (N - s) / (N * C) * (N / S) ** (s / N) * cross
    return lhs, rhs


# ---------------------------------------------------------------------------
# trial functions


def trial_function(params, n, m=None):
    """u_n for N > ps; u_{n,m} (vanishing for r <= 1/n, a linear cut-off on
    [m, 2m]) for N < ps."""
    if n < 2 or int(n) != n:
        raise InvalidParams("n must be an integer >= 2")
    a = params.alpha
    if params.subcritical:
        if m is not None:
            raise InvalidParams("m is only used when N < ps")
        top = -math.expm1(-a * math.log(n))
        return RadialPiecewisePower((0.0, 1.0, float(n)),
                                    ((0.0, 0.0, top), (1.0, a, -n ** (-a))))
    if m is None:
        raise InvalidParams("N < ps needs the cut-off radius m")
    if m <= 1:
        raise InvalidParams("m must exceed 1")
    top = -math.expm1(a * math.log(n))
    return RadialPiecewisePower(
        (0.0, 1.0 / n, 1.0, float(m), 2.0 * m),
        ((0.0, 0.0, 0.0), (1.0, a, -n ** a), (0.0, 0.0, top), (-top / m, -1.0, 2.0 * top)))


def sharpness_scan(params, n_list, m_factor=10, C=None, rel_tol=OUTER_TOL):
    """[(n, quotient, quotient - C)] for the trial functions at each n."""
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InvalidParams("n_list must be increasing")
    if C is None:
        C = hardy_constant(params).value
    out = []
    for n in n_list:
        m = None if params.subcritical else m_factor * n
        q = rayleigh_quotient(params, trial_function(params, n, m), rel_tol)
        out.append((n, q, q - C))
    return out


@dataclass(frozen=True)
class SharpnessTerms:
    energy: float
    weighted: float
    R0: float
    R1: float
    R2: float


def sharpness_terms(params, n, rel_tol=OUTER_TOL):
    """Energy, weighted norm and the three error terms for u_n (N > ps).

    They satisfy energy + 2 R0 = C (weighted + R1 + R2) exactly.
    """
    if not params.subcritical:
        raise InvalidParams("the error terms are defined for N > ps")
    N, ps, p, a = params.N, params.ps, params.p, params.alpha
    S = sphere_area(N)
    u = trial_function(params, n)
    top = -math.expm1(-a * math.log(n))
    na = n ** (-a)
    R1 = S * top * (1.0 / a - top ** (p - 1.0) / (N - ps))

    def r2(x):
        om = np.exp(-a * x)
        body = (om - na) * (om ** (p - 1.0) - (om - na) ** (p - 1.0))
        return body * np.exp((N - ps) * x)

    R2 = S * integrate_adaptive(r2, 0.0, math.log(n), INNER_TOL, 0.0, vectorized=True).value
    R0 = _r0(params, n, rel_tol)
    return SharpnessTerms(radial_energy(params, u, rel_tol).value,
                          weighted_norm(params, u).value, R0, R1, R2)


def _r0(params, n, rel_tol):
    N, ps, p, a = params.N, params.ps, params.p, params.alpha
    if p == 1.0:
        return 0.0
    na = n ** (-a)
    top = 1.0 - na
    logn = math.log(n)

    def inner(lw):
        wa = math.exp(-a * lw)  # w^{-alpha}

        def f1(x):
            oy = np.exp(-a * x)
            gap = oy * math.expm1(-a * lw)
            one = -np.expm1(-a * x)
            return one * (gap ** (p - 1.0) - one ** (p - 1.0)) * np.exp((N - ps) * x)

        def f2(x):
            oy = np.exp(-a * x)
            ox = oy * wa
            gap = oy * math.expm1(-a * lw)
            return (ox - na) * (gap ** (p - 1.0) - (ox - na) ** (p - 1.0)) * np.exp((N - ps) * x)

        def f3(x):
            oy = np.exp(-a * x)
            gap = oy * math.expm1(-a * lw)
            return top * (gap ** (p - 1.0) - top ** (p - 1.0)) * np.exp((N - ps) * x)

        total = 0.0
        for f, lo, hi in ((f1, 0.0, min(logn, -lw)),
                          (f2, max(logn, -lw), logn - lw),
                          (f3, logn, -lw)):
            L = hi - lo
            if L <= 0.0:
                continue
            if L < 1e-3:
                xs = lo + 0.5 * L * (_GL_X + 1.0)
                total += 0.5 * L * float(np.dot(_GL_W, f(xs)))
            else:
                total += integrate_adaptive(f, lo, hi, INNER_TOL, 0.0, vectorized=True).value
        return total

    g0 = ps
    kappa = p - ps + 1.0

    def left(sig):
        out = np.empty_like(sig)
        w = sig ** (1.0 / g0)
        phi = phi_scaled(N, ps, 1.0 - w) / (1.0 - w) ** (1.0 + ps)
        for idx in np.ndindex(sig.shape):
            wi = float(w[idx])
            out[idx] = 0.0 if wi <= 0.0 else (
                wi ** N * phi[idx] * inner(math.log(sig[idx]) / g0) / (g0 * sig[idx]))
        return out

    def right(xi):
        out = np.empty_like(xi)
        delta = xi ** (1.0 / kappa)
        phis = phi_scaled(N, ps, delta)
        for idx in np.ndindex(xi.shape):
            d = float(delta[idx])
            w = 1.0 - d
            out[idx] = w ** (N - 1.0) * phis[idx] * inner(math.log1p(-d)) * d ** (-kappa - ps) / kappa
        return out

    pts = [(1.0 / n) ** g0] if 1.0 / n < 0.5 else []
    A = integrate_adaptive(left, 0.0, 0.5 ** g0, rel_tol, 0.0, points=pts, vectorized=True)
    B = integrate_adaptive(right, 0.0, 0.5 ** kappa, rel_tol, 0.0, vectorized=True)
    return sphere_area(N) * (A.value + B.value)


# ---------------------------------------------------------------------------
# file format


def read_radial_file(path):
    """Lines ``break r_k`` (r_1 < ... < r_K; a leading ``break 0`` is allowed)
    and ``piece c beta d`` in order; ``#`` starts a comment."""
    breaks, pieces = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            try:
                if line[0] == "break" and len(line) == 2:
                    breaks.append(float(line[1]))
                elif line[0] == "piece" and len(line) == 4:
                    pieces.append(tuple(float(x) for x in line[1:]))
                else:
                    raise ValueError
            except ValueError as exc:
                raise InvalidParams(f"{path}:{lineno}: cannot parse {raw.strip()!r}") from exc
    if breaks and breaks[0] == 0.0:
        breaks = breaks[1:]
    return RadialPiecewisePower((0.0,) + tuple(breaks), tuple(pieces))
