"""Exception hierarchy shared by all modules."""


class LDBPError(Exception):
    """Base class for errors raised by this package."""


class InputDomainError(LDBPError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class ConstructionError(LDBPError):
    """A body, profile or certificate could not be constructed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EpsilonTooLargeError(ConstructionError):
    """The perturbation makes the defining equation of the body unsolvable."""


class SeedRejectedError(ConstructionError):
    """The seed body's transform is not certifiably negative."""


class BodyNotContainedError(LDBPError):
    """A body reaches or exceeds the unit sphere where containment is required."""


class DegenerateInputError(InputDomainError):
    """Input is degenerate (coincident points, non-strict ordering, ...)."""


class MethodMismatchError(LDBPError):
    """The requested transform method does not apply to the given degree or body."""


class AccuracyError(LDBPError):
    """A numerical result could not be certified to the requested accuracy."""


class NumericalInstabilityError(AccuracyError):
    """An extrapolation ladder failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PreconditionError(LDBPError):
    """A documented precondition of an operation does not hold."""


class SpecParseError(LDBPError, ValueError):
    """A body-spec document is malformed.

    ``path`` points at the offending node, e.g. ``"base.base.q"``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class SpecValidationError(SpecParseError):
    """A body-spec document is well formed but a parameter is out of range."""
