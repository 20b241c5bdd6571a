"""Exception types shared across the package."""


class MotError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(MotError):
    pass


class EmptyList(InvalidInput):
    pass


class InvalidParameter(InvalidInput):
    pass


class DimensionMismatch(MotError):
    pass


class MassMismatch(MotError):
    pass


class NotInConvexOrder(MotError):
    """Raised when no martingale coupling between the two measures exists."""


class PointOutsidePolytope(MotError):
    pass


class PointOutsideBox(MotError):
    pass


class AtomOutsideD(MotError):
    pass
