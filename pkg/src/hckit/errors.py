"""Exception types raised across the toolkit."""


class HCKitError(Exception):
    """Base class for toolkit errors."""


class OriginNotRepresentable(HCKitError, ValueError):
    pass


class DomainError(HCKitError, ValueError):
    pass


class NotClosed(HCKitError):
    pass


class PathOutsideDomain(HCKitError):
    pass


class NotContact(HCKitError):
    pass


class OperatorsNonzero(HCKitError):
    pass


class ZeroAtBase(HCKitError):
    pass


class BranchCutCrossed(HCKitError):
    pass


class DegenerateDerivative(HCKitError):
    """|Z f1| fell below the floor; ``where`` holds the offending points."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class TraceStopped(HCKitError):
    """Tracing ended early; ``partial`` holds the curve computed so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class HitZero(TraceStopped):
    pass


class LeftDomain(TraceStopped):
    pass


class ImageNotTrajectory(HCKitError):
    pass


class QuadratureNotConverged(HCKitError):
    pass


class NotAdmissible(HCKitError):
    pass


class UnknownIdentifier(HCKitError, KeyError):
    pass


class ParameterConstraintViolated(HCKitError, ValueError):
    pass
