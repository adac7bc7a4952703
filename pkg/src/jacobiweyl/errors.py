"""Exception types shared across the package."""


class JacobiWeylError(Exception):
    """Base class for all package errors."""


class WindowError(JacobiWeylError, ValueError):
    """An index fell outside a coefficient model's validity window."""


class ConfigError(JacobiWeylError, ValueError):
    """A configuration document failed validation."""


class InterlacingError(JacobiWeylError, ValueError):
    """Two spectra that must strictly interlace do not."""


class EigenConvergenceError(JacobiWeylError, RuntimeError):
    """The tridiagonal eigensolver stalled on one eigenvalue."""

    def __init__(self, index: int, sweeps: int):
        self.index = index
        self.sweeps = sweeps
        super().__init__(f"eigenvalue {index} did not converge within {sweeps} sweeps")


class PoleError(JacobiWeylError, ArithmeticError):
    """Evaluation hit (or got too close to) a pole."""

    def __init__(self, message: str, nearest: float | None = None):
        self.nearest = nearest
        super().__init__(message)


class FitError(JacobiWeylError, RuntimeError):
    """A fitted representation failed its consistency validation."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class InversionError(JacobiWeylError, RuntimeError):
    """Stieltjes inversion failed to converge over the epsilon sequence."""

    def __init__(self, message: str, partials=None):
        self.partials = partials
        super().__init__(message)


class DegreeError(JacobiWeylError, ValueError):
    """A polynomial degree is too high for the requested operation."""


class ReconstructionError(JacobiWeylError, RuntimeError):
    """Measure orthogonalization lost too much orthogonality."""

    def __init__(self, message: str, defect: float):
        self.defect = defect
        super().__init__(message)
