class BestInvError(Exception):
    """Base class; the CLI maps subclasses of ValidationError to exit code 1."""


class ValidationError(BestInvError, ValueError):
    pass


class NonFinite(ValidationError):
    pass


class TooFewRows(ValidationError):
    pass


class NotOrthonormal(ValidationError):
    def __init__(self, deviation: float, tol: float):
        super().__init__(f"max |U^H U - I| = {deviation:.3e} exceeds tol {tol:.1e}")
        self.deviation = deviation
        self.tol = tol


class ConfigInvalid(ValidationError):
    pass


class PolygonInvalid(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class SameIndex(ValidationError):
    pass


class ZeroRow(ValidationError):
    pass


class PreconditionViolated(ValidationError):
    pass


class CaseBPreconditionViolated(PreconditionViolated):
    pass


class NotDivisibleBy4(ValidationError):
    pass


class DegenerateSample(BestInvError, RuntimeError):
    pass


class NoNonpositiveEntry(BestInvError, AssertionError):
    """The certificate matrix came out entrywise positive.

    This cannot happen for a valid row configuration, so it always signals a
    defect (bad input that slipped through validation, or a numerical bug).
    """
