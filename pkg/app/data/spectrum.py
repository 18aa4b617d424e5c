"""
Pydantic models for the ordered spectrum.
"""
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field

from app.data.problem import BoundaryKind


class SpectrumEntry(BaseModel):
    """
    An eigenvalue of angular family l with its spherical-harmonic multiplicity.

    ``j_first`` and ``j_last`` are the global ordinals the entry occupies.
    """
    lam: float = Field(..., ge=0.0, alias="lambda")
    l: int
    multiplicity: int = Field(..., ge=1)
    j_first: int = Field(..., ge=1)
    j_last: int = Field(..., ge=1)

    model_config = ConfigDict(populate_by_name=True)

    @property
    def ordinal_range(self) -> tuple[int, int]:
        return self.j_first, self.j_last


class Spectrum(BaseModel):
    """
    Ordered spectrum of one problem, truncated to a number of ordinals.
    """
    N: int
    kind: BoundaryKind
    sigma: Optional[float] = None
    entries: List[SpectrumEntry]
    truncated: bool = False
    zero_eigenspace_infinite: bool = False

    def values(self) -> List[float]:
        """Eigenvalues repeated according to the ordinals they occupy."""
        expanded: List[float] = []
        for entry in self.entries:
            expanded.extend([entry.lam] * (entry.j_last - entry.j_first + 1))
        return expanded

    def positive_values(self) -> List[float]:
        return [value for value in self.values() if value > 0.0]

    @property
    def total_ordinals(self) -> int:
        return self.entries[-1].j_last if self.entries else 0
