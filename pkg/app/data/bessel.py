"""
Pydantic model for the ultraspherical Bessel bundle at one argument.
"""
from typing import Tuple
from pydantic import BaseModel, ConfigDict, Field


class BesselBundle(BaseModel):
    """
    Values and first three derivatives of j_l and of the scaled i_l at z.

    Every entry of ``i_scaled`` equals e^{-z} times the true value; the removed
    logarithm is kept in ``scale_exponent`` and is never re-applied here.
    """
    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=2)
    l: int = Field(..., ge=0)
    z: float = Field(..., gt=0.0)
    j: Tuple[float, float, float, float]
    i_scaled: Tuple[float, float, float, float]
    scale_exponent: float

    def cross(self, a: int, b: int) -> float:
        """
        Scaled cross product [a, b] = j^(a) i^(b) - i^(a) j^(b).

        Args:
            a: Derivative order of the first factor (0..3).
            b: Derivative order of the second factor (0..3).

        Returns:
            The cross product carrying the factor e^{-z} exactly once.
        """
        return self.j[a] * self.i_scaled[b] - self.i_scaled[a] * self.j[b]

    def cross_scale(self, a: int, b: int) -> float:
        """|j^(a) i^(b)| + |i^(a) j^(b)|, the magnitude against which [a, b] is compared."""
        return abs(self.j[a] * self.i_scaled[b]) + abs(self.i_scaled[a] * self.j[b])
