"""Exception types shared across the package."""


class TritstateError(Exception):
    """Base class for domain errors raised by this package."""


class ZeroVectorError(TritstateError, ValueError):
    """A vector is too close to zero to define a ray."""


class InadmissibleEncoding(TritstateError, ValueError):
    """An encoding has a zero value or two coinciding values."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("inadmissible encoding: " + "; ".join(self.violations))


class PromiseViolation(TritstateError):
    """A function outside the promise set was handed to an identifier."""


class ResourceCapError(TritstateError):
    """A requested enumeration exceeds the configured cap."""
