"""Exception types shared across the package."""


class CycloscopeError(Exception):
    """Base class for errors raised by this package."""


class UsageError(CycloscopeError):
    """The caller asked for something the API does not accept.

    Examples: a modulus that is not prime, an exponent outside the
    supported range, survey bounds in the wrong order.
    """


class CapacityError(CycloscopeError):
    """The request is valid but exceeds a documented resource cap.

    Raised instead of silently grinding through a computation that
    would exhaust memory or run for hours.  The message names the cap
    that was hit.
    """


class InternalError(CycloscopeError):
    """An invariant the implementation relies on failed to hold.

    Seeing this is a bug report waiting to be filed, not a usage
    problem.
    """
