"""Exception hierarchy shared by every momenta module."""


class MomentaError(Exception):
    """Base class for all library errors."""


class DomainError(MomentaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegreeError(MomentaError, ValueError):
    """Polynomial degrees do not match what an operation requires."""


class OrderExhaustedError(MomentaError, ValueError):
    """A difference order exceeds the indices available in a net."""


class NearCoincidentPoleError(MomentaError, ValueError):
    """Two poles are too close to separate but not close enough to merge."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class CoincidentRootError(MomentaError, ValueError):
    """A construction needs distinct roots but received repeated ones."""


class PreconditionError(MomentaError, ValueError):
    """An input violates the stated precondition of an operation."""


class QuadratureError(MomentaError, RuntimeError):
    """Grid refinement did not confirm convergence of a quadrature."""


class TruncationError(MomentaError, OverflowError):
    """A series hit its term cap or its safe argument range."""


class CommutationError(MomentaError, ValueError):
    """Weight arrays of a 2-shift do not commute."""


class HypothesisError(MomentaError, ValueError):
    """A structural hypothesis (isometry class) is not met."""


class ParseError(MomentaError, ValueError):
    """Malformed polynomial spec text."""

    def __init__(self, msg, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class EmptyMeasureError(MomentaError, ValueError):
    """A measure without atoms or density was passed where mass is needed."""
