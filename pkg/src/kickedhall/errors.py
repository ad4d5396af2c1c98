"""Exception types raised by the numerical routines."""


class KickedHallError(Exception):
    """Base class for all package errors."""


class ConfigError(KickedHallError):
    """Invalid parameters or configuration."""


class NumericalError(KickedHallError):
    """A numerical certification (residual, convergence, truncation) failed."""


class DegenerateFit(NumericalError):
    pass


class DegenerateInput(KickedHallError):
    pass


class NoConvergence(NumericalError):
    pass


class ConditionViolated(KickedHallError):
    pass


class OutOfRegime(KickedHallError):
    pass


class TruncationTooSmall(NumericalError):
    pass


class EigenFailure(NumericalError):
    def __init__(self, message, w=None):
        super().__init__(message)
        self.w = w


class ExtremumMismatch(NumericalError):
    pass


class WindowTooSmall(NumericalError):
    pass


class IncompatibleRuns(KickedHallError):
    pass
