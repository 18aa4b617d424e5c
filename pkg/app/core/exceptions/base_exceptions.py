"""
Base Solver Exception

This module defines the `BaseSolverException`, the root of every error the solver
raises on purpose. Each exception carries the process exit code the command line
must return together with a structured `ErrorResponse`:
- `code`: A unique error code for programmatic handling
- `message`: A human-readable error message
- `details`: Optional additional information about the error
"""

from app.core.exceptions.error_response import ErrorResponse


class BaseSolverException(Exception):
    """
    Base class for solver exceptions with structured error response.

    Args:
        exit_code (int): Process exit code the command line returns.
        code (str): Unique error code for the exception.
        message (str): Human-readable error message.
        details (str | None): Optional additional details about the error.

    Usage:
        raise BaseSolverException(
            exit_code=2,
            code="INVALID_INPUT",
            message="The provided input is invalid",
            details="sigma must lie in [0, 1]"
        )
    """
    def __init__(self, exit_code: int, code: str, message: str, details: str | None = None):
        self.exit_code = exit_code
        self.code = code
        self.message = message
        self.details = details
        self.error = ErrorResponse(code=code, message=message, details=details)
        super().__init__(self.error.one_line())
