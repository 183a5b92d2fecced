"""Exception hierarchy shared across the package.

Validation/usage problems and numerical failures are kept distinct so the
CLI can map them to different exit codes (2 and 1 respectively).
"""


class QptBoundsError(Exception):
    """Base class for all package errors."""


class ParameterError(QptBoundsError):
    """Infeasible or out-of-range input parameters."""


class ValidationError(QptBoundsError):
    """Inputs are structurally valid but violate a contract (foreign node
    ids, degenerate spectra where non-degeneracy is required, ...)."""


class GenerationError(QptBoundsError):
    """A randomized generator failed to produce a valid object within its
    retry budget."""


class NumericalError(QptBoundsError):
    """An iterative solver failed to converge; carries residual info."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class DivergenceError(NumericalError):
    """A perturbative expression diverges (degenerate denominator)."""
