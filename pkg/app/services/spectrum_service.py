"""
Service turning per-family root lists into the ordered spectrum.

Contains the spherical-harmonic multiplicities, the structural zero modes
of the free plate, ordinal bookkeeping and the l_max sufficiency rule.
"""
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Dict, List, Tuple

from app.core.config import DEFAULTS, settings
from app.core.exceptions import DomainError, InsufficientFamiliesError, InsufficientWindowError
from app.core.logging import get_logger
from app.data.problem import BallProblem
from app.data.roots import RootRecord
from app.data.spectrum import Spectrum, SpectrumEntry
from app.services.root_service import RootSolverService

logger = get_logger(__name__)


def harmonic_multiplicity(N: int, l: int) -> int:
    """
    Dimension d_l(N) of the spherical harmonics of degree l on S^(N-1).

    d_l(N) = C(N+l-1, l) - C(N+l-3, l-2), the second term vanishing for l < 2.
    """
    if N < 2 or l < 0:
        raise DomainError(message="harmonic_multiplicity needs N >= 2 and l >= 0",
                          details=f"N = {N}, l = {l}")
    total = comb(N + l - 1, l)
    if l >= 2:
        total -= comb(N + l - 3, l - 2)
    return total


class SpectrumService:
    """
    Service for ordered spectra.

    Scans every angular family up to l_max, merges the roots by lambda and
    expands them with their multiplicities.
    """

    def __init__(self, root_service: RootSolverService, max_workers: int = settings.MAX_WORKERS):
        """
        Initialize spectrum service.

        Args:
            root_service: Service for determinant roots
            max_workers: Thread pool width for per-family scans
        """
        self.root_service = root_service
        self.max_workers = max_workers

    @staticmethod
    def zero_modes(problem: BallProblem) -> List[Tuple[float, int, int]]:
        """(lambda, l, multiplicity) of the structural zero eigenvalue; empty at sigma = 1."""
        if problem.is_dirichlet or problem.sigma >= 1.0:
            return []
        return [(0.0, 0, 1), (0.0, 1, problem.N)]

    def scan_families(
        self,
        problem: BallProblem,
        lambda_max: float,
        l_max: int,
        z_step: float = DEFAULTS.z_step,
    ) -> Dict[int, List[RootRecord]]:
        """Roots of every family l = 0..l_max; results are keyed by l whatever the thread order."""
        families = list(range(l_max + 1))

        def scan(l: int) -> List[RootRecord]:
            return self.root_service.scan_roots(problem, l, lambda_max, z_step)

        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                results = list(pool.map(scan, families))
        else:
            results = [scan(l) for l in families]
        return dict(zip(families, results))

    def merge(
        self,
        problem: BallProblem,
        roots_by_family: Dict[int, List[RootRecord]],
        count: int,
    ) -> Spectrum:
        """
        Merge root lists into an ordered spectrum truncated to ``count`` ordinals.

        Numerically coincident roots of different families stay separate
        entries, ordered by l.
        """
        candidates: List[Tuple[float, int, int]] = list(self.zero_modes(problem))
        for l, roots in roots_by_family.items():
            multiplicity = harmonic_multiplicity(problem.N, l)
            candidates.extend((root.lam, l, multiplicity) for root in roots)
        candidates.sort(key=lambda item: (item[0], item[1]))

        entries: List[SpectrumEntry] = []
        truncated = False
        next_ordinal = 1
        for lam, l, multiplicity in candidates:
            if next_ordinal > count:
                break
            last = next_ordinal + multiplicity - 1
            if last > count:
                last = count
                truncated = True
            entries.append(
                SpectrumEntry(lam=lam, l=l, multiplicity=multiplicity,
                              j_first=next_ordinal, j_last=last)
            )
            next_ordinal = last + 1

        return Spectrum(
            N=problem.N,
            kind=problem.kind,
            sigma=problem.sigma_label,
            entries=entries,
            truncated=truncated,
            zero_eigenspace_infinite=(not problem.is_dirichlet and problem.sigma >= 1.0),
        )

    def assemble_spectrum(
        self,
        problem: BallProblem,
        lambda_max: float = DEFAULTS.lambda_max,
        l_max: int = DEFAULTS.l_max,
        count: int = DEFAULTS.count,
        z_step: float = DEFAULTS.z_step,
    ) -> Spectrum:
        """
        Ordered spectrum of ``problem`` with its first ``count`` ordinals.

        Args:
            problem: Problem to solve
            lambda_max: Upper end of the lambda window
            l_max: Highest angular family scanned
            count: Number of ordinals to return
            z_step: Scan step in z

        Returns:
            Spectrum, zero modes first for the free plate with sigma < 1

        Raises:
            DomainError: If count <= 0 or l_max < 0
            InsufficientWindowError: If the window holds fewer than ``count`` ordinals
            InsufficientFamiliesError: If family l_max reaches the returned spectrum
        """
        if count <= 0:
            raise DomainError(message="count must be positive", details=f"count = {count}")
        if l_max < 0:
            raise DomainError(message="l_max must be non-negative", details=f"l_max = {l_max}")

        zero_ordinals = sum(multiplicity for _, _, multiplicity in self.zero_modes(problem))
        if zero_ordinals >= count:
            logger.info("Zero modes fill all %d requested ordinals", count)
            return self.merge(problem, {}, count)

        roots_by_family = self.scan_families(problem, lambda_max, l_max, z_step)
        spectrum = self.merge(problem, roots_by_family, count)

        if spectrum.total_ordinals < count:
            raise InsufficientWindowError(
                details=f"{spectrum.total_ordinals} of {count} ordinals below lambda = {lambda_max:g}"
            )

        returned_max = spectrum.entries[-1].lam
        top_family = [root for root in roots_by_family[l_max] if root.lam <= returned_max]
        if top_family:
            raise InsufficientFamiliesError(
                details=f"family l={l_max} has a root at lambda={top_family[0].lam:.6g}"
                f" <= {returned_max:.6g}"
            )

        logger.info(
            "Assembled %s spectrum N=%s sigma=%s: %d entries, largest lambda %.6g",
            problem.kind.value, problem.N, problem.sigma_label, len(spectrum.entries), returned_max,
        )
        return spectrum
