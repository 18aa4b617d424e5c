"""
Solver Exceptions

This module defines exceptions for failures of the numerical pipeline itself.

Includes:
- Null vector requested away from an eigenvalue
- Missing starting root for a branch
- Too few angular families or too small a lambda window for the requested count
- Singular mass matrix in the Rayleigh-Ritz reduction
- Failed verification suite
- Utility function to map raw numerical failures to the corresponding exception
"""

import numpy as np

from app.core.exceptions.base_exceptions import BaseSolverException
from app.core.exceptions.domain_exceptions import (
    EXIT_BAD_CONFIG,
    EXIT_VERIFICATION_FAILED,
    DomainError,
)


class NotAnEigenvalueError(BaseSolverException):
    """
    Raised when a null vector is requested for a matrix that is far from singular.

    Args:
        details (str | None, optional): Singular value ratio and location.
    """
    def __init__(self, *, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="NOT_AN_EIGENVALUE",
            message="not an eigenvalue",
            details=details,
        )


class StartingRootMissingError(BaseSolverException):
    """
    Raised when a branch cannot be started because its root ordinal does not exist.

    Args:
        details (str | None, optional): Family, ordinal and window.
    """
    def __init__(self, *, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="STARTING_ROOT_MISSING",
            message="starting root missing",
            details=details,
        )


class InsufficientFamiliesError(BaseSolverException):
    """
    Raised when the highest scanned angular family still reaches the returned spectrum.

    Args:
        details (str | None, optional): The offending family and root.
    """
    def __init__(self, *, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="L_MAX_TOO_SMALL",
            message="l_max too small",
            details=details,
        )


class InsufficientWindowError(BaseSolverException):
    """
    Raised when the lambda window holds fewer eigenvalues than requested.

    Args:
        details (str | None, optional): Requested and found ordinal counts.
    """
    def __init__(self, *, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="LAMBDA_MAX_TOO_SMALL",
            message="lambda_max too small",
            details=details,
        )


class SingularMassMatrixError(BaseSolverException):
    """
    Raised when the Gram matrix of a trial basis cannot be factorized.

    Args:
        details (str | None, optional): Pivot information.
    """
    def __init__(self, *, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="SINGULAR_MASS_MATRIX",
            message="mass matrix is numerically singular",
            details=details,
        )


class VerificationFailedError(BaseSolverException):
    """
    Raised when at least one check of the verification suite fails.

    Args:
        failed (list[str]): Names of the failing checks.
    """
    def __init__(self, *, failed: list[str]):
        self.failed = failed
        super().__init__(
            exit_code=EXIT_VERIFICATION_FAILED,
            code="VERIFICATION_FAILED",
            message=f"{len(failed)} check(s) failed",
            details=", ".join(failed),
        )


def map_numeric_error(operation: str, exc: Exception) -> BaseSolverException:
    """
    Map a raw numerical failure to a specific solver exception.

    Args:
        operation (str): Description of the operation being attempted (for context in the error message).
        exc (Exception): The exception raised by numpy or by arithmetic.

    Returns:
        BaseSolverException: A specific exception corresponding to the error type.
            - numpy.linalg.LinAlgError -> SingularMassMatrixError
            - ZeroDivisionError, OverflowError, ValueError -> DomainError
            - Others -> BaseSolverException with exit code 2
    """
    if isinstance(exc, BaseSolverException):
        return exc
    if isinstance(exc, np.linalg.LinAlgError):
        return SingularMassMatrixError(details=f"{operation}: {exc}")
    if isinstance(exc, (ZeroDivisionError, OverflowError, ValueError)):
        return DomainError(
            message=f"numerical failure while attempting to {operation}",
            details=str(exc),
        )
    return BaseSolverException(
        exit_code=EXIT_BAD_CONFIG,
        code="NUMERIC_ERROR",
        message=f"unexpected failure while attempting to {operation}",
        details=repr(exc),
    )
