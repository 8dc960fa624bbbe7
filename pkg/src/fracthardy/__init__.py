"""Sharp fractional Hardy inequalities: constants, ground state
representations and desk-scale verification tools."""

from .constants import (
    ConstantReport,
    Method,
    embedding_constant,
    hardy_constant,
    hardy_constant_crosscheck,
    hardy_constant_p1n1,
    hardy_constant_p2,
    phi_kernel,
    remainder_constant,
)
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    HardyError,
    InvalidParams,
    NonpositiveGroundState,
    OutOfDomain,
    PoleError,
    UnboundedSupport,
    ZeroDenominator,
)
from .numerics import QuadResult, gamma_fn, integrate_adaptive, minimize_scalar, sphere_area
from .params import HardyParams, make_params

__version__ = "0.1.0"

__all__ = [
    "ConstantReport", "Method", "embedding_constant", "hardy_constant",
    "hardy_constant_crosscheck", "hardy_constant_p1n1", "hardy_constant_p2",
    "phi_kernel", "remainder_constant",
    "ConvergenceFailure", "DimensionMismatch", "HardyError", "InvalidParams",
    "NonpositiveGroundState", "OutOfDomain", "PoleError", "UnboundedSupport",
    "ZeroDenominator",
    "QuadResult", "gamma_fn", "integrate_adaptive", "minimize_scalar", "sphere_area",
    "HardyParams", "make_params",
]
