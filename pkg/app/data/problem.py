"""
Pydantic models describing which eigenproblem is being solved.
"""
from enum import Enum
from pydantic import BaseModel, ConfigDict, Field


class BoundaryKind(str, Enum):
    """Boundary conditions on the unit sphere."""
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class BallProblem(BaseModel):
    """
    Biharmonic eigenproblem on the unit ball of R^N.

    ``sigma`` is the Poisson ratio of the free (Neumann) plate; it is carried
    but ignored for the clamped (Dirichlet) plate.
    """
    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=2)
    sigma: float = Field(0.0, ge=0.0, le=1.0)
    kind: BoundaryKind = BoundaryKind.NEUMANN

    @property
    def is_dirichlet(self) -> bool:
        return self.kind is BoundaryKind.DIRICHLET

    @property
    def sigma_label(self) -> float | None:
        """Poisson ratio as reported in outputs; None for the clamped plate."""
        return None if self.is_dirichlet else self.sigma


def bessel_order(N: int, l: int) -> float:
    """Order nu = N/2 - 1 + l of the Bessel functions behind j_l and i_l."""
    return N / 2.0 - 1.0 + l


def angular_eigenvalue(N: int, l: int) -> int:
    """Laplace-Beltrami eigenvalue l(l+N-2) of the spherical harmonics of degree l."""
    return l * (l + N - 2)
