"""
Pydantic model for a refined root of a boundary determinant.
"""
from typing import Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field

from app.data.problem import BoundaryKind


class RootRecord(BaseModel):
    """
    One eigenvalue candidate of family (N, l).

    The bracket is given in z = lambda**(1/4) and has opposite determinant
    signs at its ends. ``sigma`` is None for the clamped plate.
    """
    N: int
    l: int
    kind: BoundaryKind
    sigma: Optional[float] = None
    lam: float = Field(..., gt=0.0, alias="lambda")
    z: float
    bracket: Tuple[float, float]
    residual: float
    iterations: int

    model_config = ConfigDict(populate_by_name=True, frozen=True)
