"""Exceptions raised by the qsync numerics."""


class QsyncError(Exception):
    """Base class for all qsync errors."""


class NonDecaying(QsyncError):
    """A decay root has non-negative real part, so no fixed-point limit exists."""


class InvalidState(QsyncError):
    """A density matrix violates trace, Hermiticity or positivity."""


class QuadratureDivergence(QsyncError):
    """Quadrature and closed-form synchronization measures disagree."""


class StepTooLarge(QsyncError):
    """The fixed RK4 step is too coarse for the fastest rate in the problem."""


class RecurrenceHorizonExceeded(QsyncError):
    """Integration time exceeds the recurrence time of the discretized mode set."""


class ConfigError(QsyncError, ValueError):
    """Invalid run configuration."""
