"""
Pydantic models for the polynomial Rayleigh-Ritz oracle on the unit disk.
"""
from typing import List, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class TrialFunction(BaseModel):
    """u = r^(l+2m) * trig(l theta); ``trig`` is 'const' for l = 0."""
    model_config = ConfigDict(frozen=True)

    l: int
    m: int
    trig: str

    @property
    def degree(self) -> int:
        return self.l + 2 * self.m


class TrialBasis(BaseModel):
    """
    Polynomial trial space on the unit disk.

    Each entry (l, m) stands for the radial profile r^(l+2m) combined with
    every angular factor of degree l (cos and sin for l >= 1).
    """
    model_config = ConfigDict(frozen=True)

    entries: List[Tuple[int, int]]

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, entries: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        if len(set(entries)) != len(entries):
            raise ValueError("trial basis entries must be distinct")
        if any(l < 0 or m < 0 for l, m in entries):
            raise ValueError("trial basis indices must be non-negative")
        if (0, 0) not in entries or (1, 0) not in entries:
            raise ValueError("trial basis must contain (0, 0) and (1, 0)")
        return sorted(entries)

    @classmethod
    def full(cls, l_max: int, m_max: int) -> "TrialBasis":
        """All (l, m) with l <= l_max and m <= m_max."""
        return cls(entries=[(l, m) for l in range(l_max + 1) for m in range(m_max + 1)])

    @classmethod
    def harmonic(cls, l_max: int) -> "TrialBasis":
        """Harmonic polynomials Re z^l, Im z^l up to degree ``l_max``."""
        return cls(entries=[(l, 0) for l in range(max(l_max, 1) + 1)])

    @property
    def size(self) -> int:
        return len(self.functions())

    @property
    def angular_indices(self) -> List[int]:
        return sorted({l for l, _ in self.entries})

    def radial_indices(self, l: int) -> List[int]:
        return [m for entry_l, m in self.entries if entry_l == l]

    def functions(self) -> List[TrialFunction]:
        """Trial functions in assembly order (l, trig, m); m = 0 comes first in each block."""
        functions: List[TrialFunction] = []
        for l in self.angular_indices:
            for trig in (("const",) if l == 0 else ("cos", "sin")):
                functions.extend(
                    TrialFunction(l=l, m=m, trig=trig) for m in self.radial_indices(l)
                )
        return functions


class FormMatrices(BaseModel):
    """
    Quadratic forms of a trial basis: A(sigma) = (1-sigma) hessian + sigma laplacian, B = mass.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    functions: List[TrialFunction]
    hessian: np.ndarray
    laplacian: np.ndarray
    mass: np.ndarray
    blocks: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="Half-open index ranges of the (l, trig) diagonal blocks",
    )

    def stiffness(self, sigma: float) -> np.ndarray:
        return (1.0 - sigma) * self.hessian + sigma * self.laplacian
