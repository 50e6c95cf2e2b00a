"""Exception hierarchy shared by all fracdimer modules."""


class FracDimerError(Exception):
    """Base class for every error raised by fracdimer."""


class NonConvergent(FracDimerError):
    """A truncated expansion hit its hard term cap before converging."""


class OutOfDomain(FracDimerError, ValueError):
    """An evaluator was called outside the region where it is valid."""


class NotHermitian(FracDimerError, ValueError):
    pass


class NormCollapse(FracDimerError):
    """The evolved amplitude vector has (numerically) vanished."""


class InvalidDensityMatrix(FracDimerError, ValueError):
    pass


class ZetaUnderflow(FracDimerError, ValueError):
    """Dipole kernels requested at a separation too small to evaluate directly."""


class StepSizeTooCoarse(FracDimerError):
    """Two Caputo integrator runs at h and h/2 disagree beyond tolerance."""


class ParseError(FracDimerError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(FracDimerError, ValueError):
    pass


class UnknownField(FracDimerError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown field"


class SweepPointError(FracDimerError):
    """A single grid point of a sweep failed; carries its coordinates."""

    def __init__(self, point, cause):
        self.point = dict(point)
        self.cause = cause
        coords = ", ".join(f"{k}={v:.12g}" for k, v in self.point.items())
        super().__init__(f"sweep point ({coords}) failed: {type(cause).__name__}: {cause}")
