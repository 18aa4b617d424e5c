"""
This module is the console entry point of the ballspec command line.

It sets up:
- Application-level logging on stderr from the runtime settings.
- A run ID stamped on every log record of the invocation.
- Dispatch to the command routes, whose return value becomes the exit code.
"""
import logging
import sys
from typing import Optional, Sequence

from app.api.commands import run
from app.core.config import settings
from app.core.filter import generate_run_id, set_run_id
from app.core.logging import setup_logger


def main(argv: Optional[Sequence[str]] = None) -> None:
    level = logging.getLevelName(settings.LOG_LEVEL.upper())
    setup_logger(level=level if isinstance(level, int) else logging.WARNING, log_file=settings.LOG_FILE)
    set_run_id(generate_run_id())
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
