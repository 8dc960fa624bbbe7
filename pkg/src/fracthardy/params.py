"""The parameter triple (N, s, p) and its derived exponents."""

import math
from dataclasses import dataclass, field

from .errors import InvalidParams

EXCLUSION_BAND = 1e-12


@dataclass(frozen=True)
class HardyParams:
    """Dimension ``N``, fractional order ``s`` and exponent ``p``.

    ``alpha = (N - p s) / p`` is the decay exponent of the virtual ground
    state ``|x|^-alpha``; ``p_star = N p / (N - p s)`` is the Sobolev
    exponent and is ``None`` when ``N < p s``.
    """

    N: int
    s: float
    p: float
    alpha: float = field(init=False)
    p_star: float | None = field(init=False)

    def __post_init__(self):
        N, s, p = self.N, self.s, self.p
        if isinstance(N, bool) or int(N) != N or N < 1:
            raise InvalidParams(f"N must be a positive integer, got {N!r}")
        if not (0.0 < s < 1.0):
            raise InvalidParams(f"s must lie in (0, 1), got {s!r}")
        if not (p >= 1.0) or math.isinf(p):
            raise InvalidParams(f"p must be a finite real >= 1, got {p!r}")
        if abs(N - p * s) < EXCLUSION_BAND:
            raise InvalidParams(f"p = N/s is excluded (N={N}, s={s}, p={p})")
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "s", float(s))
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "alpha", (N - p * s) / p)
        object.__setattr__(self, "p_star", N * p / (N - p * s) if N > p * s else None)

    @property
    def ps(self):
        return self.p * self.s

    @property
    def subcritical(self):
        """True on the ``N > p s`` branch."""
        return self.alpha > 0


def make_params(N, s, p):
    return HardyParams(N, s, p)
