"""
Service for Rayleigh-Ritz upper bounds on the free-plate eigenvalues of the disk.
"""
from typing import List, Optional

import numpy as np

from app.core.exceptions import (
    BaseSolverException,
    DomainError,
    UnsupportedDimensionError,
    map_numeric_error,
)
from app.core.logging import get_logger
from app.data.ritz import FormMatrices, TrialBasis
from app.repositories.ritz_repository import RitzRepository
from app.utils.jacobi import cholesky_factor, generalized_eigh, lower_triangular_inverse

logger = get_logger(__name__)

DEFAULT_L_MAX = 6
DEFAULT_M_MAX = 6


def default_basis(m_max: int = DEFAULT_M_MAX, l_max: int = DEFAULT_L_MAX) -> TrialBasis:
    return TrialBasis.full(l_max, m_max)


class RitzService:
    """
    Rayleigh-Ritz oracle for N = 2.

    Solves A(sigma) x = theta B x block by block; the sorted Ritz values bound
    the ordered eigenvalues lambda_j(sigma) from above.
    """

    def __init__(self, ritz_repository: RitzRepository):
        """
        Initialize Ritz service.

        Args:
            ritz_repository: Repository assembling the form matrices
        """
        self.ritz_repository = ritz_repository

    def ritz_values(self, matrices: FormMatrices, sigma: float) -> np.ndarray:
        stiffness = matrices.stiffness(sigma)
        values: List[np.ndarray] = []
        for start, stop in matrices.blocks:
            block = slice(start, stop)
            try:
                values.append(generalized_eigh(stiffness[block, block], matrices.mass[block, block]))
            except BaseSolverException:
                raise
            except Exception as exc:
                raise map_numeric_error("ritz_upper_bounds", exc) from exc
        return np.sort(np.concatenate(values), kind="stable")

    def ritz_upper_bounds(self, basis: TrialBasis, sigma: float, count: int) -> List[float]:
        """
        First ``count`` Ritz values of ``basis`` at ``sigma``.

        Args:
            basis: Trial basis
            sigma: Poisson ratio in [0, 1)
            count: Number of values returned

        Returns:
            Ascending upper bounds for lambda_1(sigma), ..., lambda_count(sigma)

        Raises:
            DomainError: If sigma is outside [0, 1) or count exceeds the basis size
            SingularMassMatrixError: If the mass matrix is numerically singular
        """
        if not 0.0 <= sigma < 1.0:
            raise DomainError(message="Ritz bounds need sigma in [0, 1)", details=f"sigma = {sigma!r}")
        if count < 1 or count > basis.size:
            raise DomainError(
                message="count must lie between 1 and the basis size",
                details=f"count = {count}, basis size = {basis.size}",
            )
        matrices = self.ritz_repository.assemble(basis)
        values = self.ritz_values(matrices, sigma)
        logger.debug("Ritz values at sigma=%g over %d functions: %s", sigma, basis.size, values[:count])
        return [float(value) for value in values[:count]]

    def harmonic_energies(self, j: int) -> List[float]:
        """
        Normalized Hessian energies of the first ``j`` harmonic trials 1, x, y, Re z^2, Im z^2, ...

        The trials are orthonormalized in L^2 before the energies are read off.
        """
        if j < 1:
            raise DomainError(message="j must be >= 1", details=f"j = {j}")
        l_max = (j + 1) // 2
        matrices = self.ritz_repository.assemble(TrialBasis.harmonic(l_max))
        hessian = matrices.hessian[:j, :j]
        mass = matrices.mass[:j, :j]
        inverse = lower_triangular_inverse(cholesky_factor(mass))
        normalized = inverse @ hessian @ inverse.T
        return [float(value) for value in np.diag(normalized)]

    def est_conv_constant(self, j: int, N: int = 2) -> float:
        """
        C_j = j * max_{i <= j} integral |D^2 u_i|^2 over L^2-orthonormal harmonic trials.

        lambda_j(sigma) <= C_j (1 - sigma) for every sigma in [0, 1].
        """
        if N != 2:
            raise UnsupportedDimensionError(operation="est_conv_constant", dimension=N)
        return j * max(self.harmonic_energies(j))

    def harmonic_bounds(self, sigma: float, count: int) -> List[float]:
        """Ritz bounds over the harmonic trials with degree <= count."""
        return self.ritz_upper_bounds(TrialBasis.harmonic(count), sigma, count)

    def kernel_dimension(self, basis: TrialBasis, sigma: float, threshold: float = 1e-8) -> int:
        """Number of Ritz values below ``threshold``."""
        matrices = self.ritz_repository.assemble(basis)
        return int(np.sum(self.ritz_values(matrices, sigma) < threshold))

    def bounds_for_bases(
        self, sigma: float, count: int, m_values: List[int], l_max: Optional[int] = None
    ) -> List[List[float]]:
        """Ritz bounds for a sequence of growing bases (one row per m_max)."""
        l_max = DEFAULT_L_MAX if l_max is None else l_max
        return [self.ritz_upper_bounds(TrialBasis.full(l_max, m_max), sigma, count) for m_max in m_values]
