"""
Domain Exception Classes

Raised when an argument lies outside the documented range of an operation or when
a run configuration is inconsistent. All of them map to exit code 2.
"""

from app.core.exceptions.base_exceptions import BaseSolverException

EXIT_BAD_CONFIG = 2
EXIT_VERIFICATION_FAILED = 1


class DomainError(BaseSolverException):
    """
    Raised when an argument falls outside the domain of an operation.

    Args:
        message (str): Human-readable error message.
        details (str | None, optional): Offending value or range.
    """
    def __init__(self, *, message: str, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="DOMAIN_ERROR",
            message=message,
            details=details,
        )


class UnsupportedDimensionError(BaseSolverException):
    """
    Raised when an operation exists only for a particular space dimension.

    Args:
        operation (str): The operation that was requested.
        dimension (int): The dimension it was requested for.
    """
    def __init__(self, *, operation: str, dimension: int):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="UNSUPPORTED_DIMENSION",
            message=f"{operation} is only available for N = 2",
            details=f"N = {dimension}",
        )


class ConfigurationError(BaseSolverException):
    """
    Raised when the command line cannot be turned into a valid run configuration.

    Args:
        message (str): Human-readable error message.
        details (str | None, optional): Optional additional details.
    """
    def __init__(self, *, message: str, details: str | None = None):
        super().__init__(
            exit_code=EXIT_BAD_CONFIG,
            code="BAD_CONFIG",
            message=message,
            details=details,
        )
