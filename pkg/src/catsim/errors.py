"""Exception hierarchy shared by every catsim module."""


class CatsimError(Exception):
    """Base class for all catsim failures."""


class InvalidArgumentError(CatsimError, ValueError):
    """A parameter lies outside its documented domain."""


class InvalidStateError(CatsimError, ValueError):
    """A state violates an invariant (normalization, hermiticity, ...)."""


class DegenerateAmplitudeError(CatsimError, ValueError):
    """A cat amplitude is too small for its normalization to be meaningful."""


class ZeroStateError(CatsimError, ArithmeticError):
    """An operation produced the zero vector, which cannot be normalized."""


class ImpossibleOutcomeError(CatsimError, ArithmeticError):
    """A measurement outcome has (numerically) zero probability."""


class TruncationError(CatsimError, ArithmeticError):
    """The Fock cutoff discards more probability than the tolerance allows.

    The offending :class:`~catsim.fock.TruncationReport` (or leaked weight for
    two-mode operations) is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConvergenceError(CatsimError, ArithmeticError):
    """An iterative numerical routine did not reach its tolerance."""
