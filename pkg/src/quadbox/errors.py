"""Exception types shared across the package."""


class QuadboxError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(QuadboxError):
    pass


class ZeroInverse(QuadboxError):
    pass


class EmptyInterval(QuadboxError):
    pass


class DegenerateForm(QuadboxError):
    pass


class ReducibleModP(QuadboxError):
    pass


class SmallPrime(QuadboxError):
    pass


class NotFound(QuadboxError):
    pass


class RegimeOverflow(QuadboxError):
    pass


class GuardExceeded(QuadboxError):
    pass


class NotSquareFree(QuadboxError):
    pass


class DTooSmall(QuadboxError):
    pass


class NotApplicable(QuadboxError):
    pass


class DifferentBranch(QuadboxError):
    pass


class FactorizationTimeout(QuadboxError):
    pass


class InversionMismatch(QuadboxError):
    pass


class PipelineMismatch(QuadboxError):
    pass


class Underdetermined(QuadboxError):
    pass
