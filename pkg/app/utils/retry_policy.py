"""
Bracket expansion policy for branch tracing.

A predicted root is searched in a window around the prediction; when the
window holds no sign change it is widened geometrically and searched again.
"""
from typing import Callable, Optional, TypeVar

from app.core.config import DEFAULTS
from app.core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar('T')


class BracketPolicy:
    """
    Expansion policy for the search window around a predicted root.
    """
    def __init__(
        self,
        initial_width: float = DEFAULTS.bracket_windows[0],
        expansion_base: float = 4.0,
        max_expansions: int = len(DEFAULTS.bracket_windows) - 1,
    ):
        """
        Initialize bracket policy.

        Args:
            initial_width: Relative half-width of the first window
            expansion_base: Factor applied to the width at every expansion
            max_expansions: Number of widenings after the first attempt
        """
        self.initial_width = initial_width
        self.expansion_base = expansion_base
        self.max_expansions = max_expansions

    def get_width(self, attempt: int) -> float:
        """
        Relative half-width used on a given attempt (0-indexed).

        Args:
            attempt: Current attempt number

        Returns:
            Relative half-width of the window
        """
        return self.initial_width * (self.expansion_base ** attempt)

    @property
    def widths(self) -> list[float]:
        return [self.get_width(attempt) for attempt in range(self.max_expansions + 1)]


def expand_until_found(
    func: Callable[[float], Optional[T]],
    policy: Optional[BracketPolicy] = None,
) -> Optional[T]:
    """
    Call ``func`` with growing window widths until it returns a result.

    Args:
        func: Search function taking a relative half-width; returns None when
            the window holds no root
        policy: Expansion policy to use (defaults to 2%, 8%, 32%)

    Returns:
        First non-None result, or None when every window is exhausted
    """
    if policy is None:
        policy = BracketPolicy()

    for attempt in range(policy.max_expansions + 1):
        width = policy.get_width(attempt)
        result = func(width)
        if result is not None:
            return result
        if attempt < policy.max_expansions:
            logger.debug(
                "No sign change within +-%.0f%%, widening (attempt %s/%s)",
                100.0 * width,
                attempt + 1,
                policy.max_expansions + 1,
            )
    return None
