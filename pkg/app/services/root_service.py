"""
Service for locating zeros of the boundary determinants.

Scans z = lambda**(1/4) for sign changes of the row-equilibrated determinant,
refines every bracket by bisection and polishes with one secant step kept
only when it stays inside the final bracket.
"""
import math
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from app.core.config import DEFAULTS
from app.core.exceptions import DomainError
from app.core.logging import get_logger
from app.data.problem import BallProblem
from app.data.roots import RootRecord
from app.repositories.ball_determinant_repository import BallDeterminantRepository

logger = get_logger(__name__)

SignFunction = Callable[[float], float]


class Refinement(BaseModel):
    """Outcome of one bracketed refinement."""
    model_config = ConfigDict(frozen=True)

    z: float
    bracket: Tuple[float, float]
    residual: float
    iterations: int


def _opposite(f_a: float, f_b: float) -> bool:
    return (f_a < 0.0) != (f_b < 0.0)


class RootSolverService:
    """
    Business rules for root location: scan grids, bracketing, refinement,
    de-duplication and residual acceptance.
    """

    def __init__(self, determinant_repository: BallDeterminantRepository):
        """
        Initialize root solver service.

        Args:
            determinant_repository: Repository for boundary determinants
        """
        self.determinant_repository = determinant_repository

    def validate_window(self, lambda_max: float, z_step: float, z_min: float) -> float:
        """
        Validate a scan window and return its upper end in z.

        Raises:
            DomainError: If the step is not positive, the window is empty, or
                lambda_max exceeds Z_MAX**4
        """
        if not z_step > 0.0:
            raise DomainError(message="z_step must be positive", details=f"z_step = {z_step!r}")
        if not lambda_max > 0.0:
            raise DomainError(message="lambda_max must be positive", details=f"lambda_max = {lambda_max!r}")
        if lambda_max > DEFAULTS.z_max ** 4:
            raise DomainError(
                message=f"lambda_max must not exceed {DEFAULTS.z_max ** 4:g}",
                details=f"lambda_max = {lambda_max!r}",
            )
        z_hi = min(lambda_max ** 0.25, DEFAULTS.z_max)
        if z_hi <= z_min:
            raise DomainError(
                message="scan window is empty",
                details=f"lambda_max**(1/4) = {z_hi!r} <= z_min = {z_min!r}",
            )
        return z_hi

    @staticmethod
    def scan_grid(z_lo: float, z_hi: float, z_step: float) -> List[float]:
        """
        Grid z_lo + k z_step, closed by z_hi.

        Halving ``z_step`` reproduces every point of the coarser grid exactly.
        """
        count = int(math.floor((z_hi - z_lo) / z_step))
        grid = [z_lo + k * z_step for k in range(count + 1)]
        grid = [z for z in grid if z < z_hi]
        grid.append(z_hi)
        return grid

    def sign_function(self, problem: BallProblem, l: int) -> SignFunction:
        repository = self.determinant_repository
        return lambda z: repository.sign_value(problem, l, z)

    @staticmethod
    def bisect(
        f: SignFunction,
        z_lo: float,
        z_hi: float,
        f_lo: float,
        f_hi: float,
        rtol: float = DEFAULTS.bisection_rtol,
        max_iter: int = DEFAULTS.bisection_max_iter,
    ) -> Refinement:
        """
        Refine a sign-change bracket to width rtol * max(1, z) and polish once by secant.

        Args:
            f: Sign function of z
            z_lo, z_hi: Bracket ends with opposite signs
            f_lo, f_hi: Function values at the ends

        Returns:
            Refinement with the root, final bracket and |f| at the root
        """
        iterations = 0
        while iterations < max_iter and (z_hi - z_lo) > rtol * max(1.0, z_hi):
            z_mid = 0.5 * (z_lo + z_hi)
            if z_mid <= z_lo or z_mid >= z_hi:
                break
            f_mid = f(z_mid)
            iterations += 1
            if f_mid == 0.0:
                return Refinement(z=z_mid, bracket=(z_lo, z_hi), residual=0.0, iterations=iterations)
            if _opposite(f_lo, f_mid):
                z_hi, f_hi = z_mid, f_mid
            else:
                z_lo, f_lo = z_mid, f_mid

        z_root = 0.5 * (z_lo + z_hi)
        if f_hi != f_lo:
            secant = z_hi - f_hi * (z_hi - z_lo) / (f_hi - f_lo)
            if z_lo < secant < z_hi:
                z_root = secant

        return Refinement(
            z=z_root,
            bracket=(z_lo, z_hi),
            residual=abs(f(z_root)),
            iterations=iterations,
        )

    def find_sign_changes(
        self, f: SignFunction, grid: List[float]
    ) -> List[Tuple[float, float, float, float]]:
        """Adjacent grid pairs with opposite signs, as (z_lo, z_hi, f_lo, f_hi)."""
        values = [f(z) for z in grid]
        return [
            (grid[k], grid[k + 1], values[k], values[k + 1])
            for k in range(len(grid) - 1)
            if _opposite(values[k], values[k + 1])
        ]

    def make_record(
        self, problem: BallProblem, l: int, refinement: Refinement
    ) -> RootRecord:
        if refinement.residual > DEFAULTS.tol_det:
            logger.warning(
                "Root of %s N=%s l=%s at z=%.15g has residual %.3e above tolerance",
                problem.kind.value, problem.N, l, refinement.z, refinement.residual,
            )
        return RootRecord(
            N=problem.N,
            l=l,
            kind=problem.kind,
            sigma=problem.sigma_label,
            lam=refinement.z ** 4,
            z=refinement.z,
            bracket=refinement.bracket,
            residual=refinement.residual,
            iterations=refinement.iterations,
        )

    @staticmethod
    def dedupe(records: List[RootRecord], tol: float = DEFAULTS.dedupe_tol) -> List[RootRecord]:
        """Drop roots closer than ``tol`` in z to the previously kept one."""
        kept: List[RootRecord] = []
        for record in sorted(records, key=lambda item: item.z):
            if kept and record.z - kept[-1].z < tol:
                logger.debug("Dropping duplicate root at z=%.15g", record.z)
                continue
            kept.append(record)
        return kept

    def scan_roots(
        self,
        problem: BallProblem,
        l: int,
        lambda_max: float,
        z_step: float = DEFAULTS.z_step,
        z_min: float = DEFAULTS.z_min,
    ) -> List[RootRecord]:
        """
        All roots of the (problem, l) determinant with lambda <= lambda_max.

        Args:
            problem: Problem whose determinant is scanned
            l: Angular index
            lambda_max: Upper end of the window
            z_step: Scan step in z
            z_min: Lower end of the window in z

        Returns:
            Roots sorted ascending

        Raises:
            DomainError: On a non-positive step or an empty window
        """
        if l < 0:
            raise DomainError(message="l must be non-negative", details=f"l = {l!r}")
        z_hi = self.validate_window(lambda_max, z_step, z_min)
        f = self.sign_function(problem, l)
        grid = self.scan_grid(z_min, z_hi, z_step)

        records = [
            self.make_record(problem, l, self.bisect(f, z_lo, z_up, f_lo, f_up))
            for z_lo, z_up, f_lo, f_up in self.find_sign_changes(f, grid)
        ]
        roots = self.dedupe(records)
        logger.debug(
            "Scanned %s N=%s l=%s sigma=%s up to lambda=%g: %d root(s)",
            problem.kind.value, problem.N, l, problem.sigma_label, lambda_max, len(roots),
        )
        return roots

    def roots_in_window(
        self,
        problem: BallProblem,
        l: int,
        z_lo: float,
        z_hi: float,
        subdivisions: int,
    ) -> List[Refinement]:
        """Refined roots inside [z_lo, z_hi] scanned on ``subdivisions`` equal sub-intervals."""
        f = self.sign_function(problem, l)
        step = (z_hi - z_lo) / subdivisions
        grid = [z_lo + k * step for k in range(subdivisions)] + [z_hi]
        return [
            self.bisect(f, a, b, f_a, f_b)
            for a, b, f_a, f_b in self.find_sign_changes(f, grid)
        ]

    def nearest_root(
        self,
        problem: BallProblem,
        l: int,
        z_predicted: float,
        width: float,
        subdivisions: int = DEFAULTS.window_subdivisions,
        z_min: float = DEFAULTS.z_min,
    ) -> Optional[Tuple[Refinement, int]]:
        """
        Root nearest to a prediction within z_predicted * (1 +- width).

        Returns:
            (refinement, number of roots seen in the window), or None when the
            window holds no sign change
        """
        z_lo = max(z_predicted * (1.0 - width), z_min)
        z_hi = min(z_predicted * (1.0 + width), DEFAULTS.z_max)
        if z_hi <= z_lo:
            return None
        found = self.roots_in_window(problem, l, z_lo, z_hi, subdivisions)
        if not found:
            return None
        best = min(found, key=lambda refinement: abs(refinement.z - z_predicted))
        return best, len(found)
