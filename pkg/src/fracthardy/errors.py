"""Exception hierarchy shared by every module."""


class HardyError(Exception):
    """Base class for all errors raised by fracthardy."""


class InvalidParams(HardyError, ValueError):
    pass


class ConvergenceFailure(HardyError, ArithmeticError):
    pass


class PoleError(HardyError, ValueError):
    pass


class OutOfDomain(HardyError, ValueError):
    pass


class DimensionMismatch(HardyError, ValueError):
    pass


class NonpositiveGroundState(HardyError, ValueError):
    pass


class ZeroDenominator(HardyError, ZeroDivisionError):
    pass


class UnboundedSupport(HardyError, ValueError):
    pass
