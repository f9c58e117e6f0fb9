"""Shared exception types."""


class WorkbenchError(Exception):
    """Base class for all graphcorr errors."""


class FormatError(WorkbenchError):
    """Malformed or inconsistent input data (JSON schema, ids, shapes)."""


class DomainError(WorkbenchError):
    """Parameter outside the mathematical domain of an operation."""


class SizeLimitError(WorkbenchError):
    """Requested computation exceeds the configured desk-scale bounds."""


class MismatchError(WorkbenchError):
    """Operands live over different graphs or incompatible grids."""


class SingularMatrixError(WorkbenchError):
    """Matrix is singular or too ill-conditioned for the requested use."""


class NoMatchingError(WorkbenchError):
    """No perfect matching exists on the thresholded nonzero pattern."""
