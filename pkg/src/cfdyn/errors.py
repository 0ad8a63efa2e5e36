"""Exception hierarchy shared by all cfdyn modules."""


class CfdynError(Exception):
    """Base class for all library errors."""


class DomainError(CfdynError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionError(CfdynError):
    """A sign/floor/comparison query stayed undecidable at the precision cap.

    Raised instead of guessing: the queried value sits on (or too close to)
    a decision boundary that interval refinement cannot separate.
"""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InsufficientDigitsError(CfdynError):
    """A symbolic word operation ran out of continued-fraction digits."""


class BreakpointHitError(CfdynError):
    """Evaluation point collided with a density breakpoint or cylinder edge."""


class EmptyWindowError(CfdynError):
    """The requested matching window is empty (pseudocenter 1, left side)."""


class FiberAmbiguityError(CfdynError):
    """Planar inverse could not attribute the point to a unique branch."""


class VerificationError(CfdynError):
    """An invariant-suite check failed (used by the CLI `verify` command)."""
