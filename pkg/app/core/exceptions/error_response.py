"""
Error Response Model

This module defines the `ErrorResponse` Pydantic model used to standardize error reports
across the command line. It provides a structured format for returning error information
on stderr.

Attributes:
    code (str): A unique error code that can be used programmatically to identify the error.
    message (str): A human-readable message describing the error.
    details (Optional[str]): Optional additional information about the error.
"""
from typing import Optional
from pydantic import BaseModel


class ErrorResponse(BaseModel):
    """
    Standardized error model for solver exceptions.

    Attributes:
        code (str): Unique error code for the error.
        message (str): Human-readable error message.
        details (Optional[str]): Optional additional details about the error.

    Example:
        {
            "code": "L_MAX_TOO_SMALL",
            "message": "l_max too small",
            "details": "family l=12 has a root at lambda=401.3"
        }
    """
    code: str
    message: str
    details: Optional[str] = None

    def one_line(self) -> str:
        """Render the error as the single diagnostic line printed on stderr."""
        if self.details:
            return f"{self.code}: {self.message} ({self.details})"
        return f"{self.code}: {self.message}"
