"""Exception types raised across the package.

Every error that signals a recoverable data or numerical condition derives
from :class:`ErmkitError`, so callers (and the CLI) can catch one base type.
Fit non-convergence is *not* an exception: the fitter returns its best
iterate with ``converged=False``.
"""


class ErmkitError(Exception):
    """Base class for all package-specific errors."""


class SingularLoopError(ErmkitError):
    """Port termination forms a lossless loop resonance: |1 - S_kk * gamma|
    fell at or below the singularity threshold, so the reduction (or the
    reflection-mode map) has no finite value."""


class NotSymmetricError(ErmkitError):
    """A three-port was expected to be symmetric under the port-1/2
    exchange but its covering residual exceeds the tolerance."""


class DegenerateJunctionError(ErmkitError):
    """The junction is too symmetric to discriminate the property being
    classified (for example, reciprocity of a perturbation when the
    port-3 coupling vanishes)."""


class PhaseUnwrapAmbiguityError(ErmkitError):
    """Adjacent frequency points differ by nearly pi radians of phase, so
    the unwrapped slope (and the fitted delay) is unreliable. Use a denser
    frequency grid or remove a coarse delay estimate first."""


class NoBracketError(ErmkitError):
    """The delay-search bracket does not contain the minimum: the coarse
    scan bottomed out at a bracket endpoint. Widen the bracket."""


class ResidualTooLargeError(ErmkitError):
    """Delay matching converged but the differential mode still traces a
    circle larger than the threshold: the network is too asymmetric for
    reflection-mode recovery."""


class InsufficientSpanError(ErmkitError):
    """The sweep does not contain enough points, or does not span enough
    linewidths around the resonance, to seed a fit."""


class SingularJacobianError(ErmkitError):
    """The least-squares normal matrix is singular at the optimum: at
    least one parameter is unidentifiable from the data."""


class TouchstoneError(ErmkitError):
    """Base class for Touchstone parsing errors. Carries the 1-based line
    number of the offending line when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class MalformedOptionLineError(TouchstoneError):
    """The '#' option line (or a structural keyword) is not valid
    Touchstone v1.1."""


class NonMonotonicFrequencyError(TouchstoneError):
    """Frequencies in the file are not strictly increasing."""


class ColumnCountMismatchError(TouchstoneError):
    """A data line does not carry the number of columns the port count
    requires."""
