"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems exit 2, failed
iterative solvers exit 3, structurally degenerate inputs exit 4.
"""


class ControversyError(Exception):
    """Base class for package-specific errors."""


class InputDataError(ControversyError):
    """Malformed or inconsistent input data (files, records, labels)."""


class ConvergenceError(ControversyError):
    """An iterative method did not converge within its iteration budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateStructureError(ControversyError):
    """The graph/partition lacks the structure a measure requires
    (empty cut, empty boundary, no terminations, ...)."""
