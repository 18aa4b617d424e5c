"""
Logging filters for the solver.
Adds contextual information to log records.
"""

import logging
import uuid
from contextvars import ContextVar
from typing import Optional

# Context variable to store the run ID of the current command
_run_id: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def set_run_id(run_id: str) -> None:
    """Set the run ID for the current context."""
    _run_id.set(run_id)


def get_run_id() -> Optional[str]:
    """Get the current run ID."""
    return _run_id.get()


def generate_run_id() -> str:
    """Generate a unique run ID."""
    return str(uuid.uuid4())


class ContextFilter(logging.Filter):
    """
    Filter that adds contextual information to log records.
    Stamps every record with the run ID of the command that emitted it.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        """
        Add context to log record.

        Args:
            record (logging.LogRecord): The log record to filter.

        Returns:
            bool: True to allow the record to be logged.
        """
        run_id = get_run_id()
        record.run_id = run_id if run_id else "N/A"
        return True
