"""
Service for eigenvalue branches sigma -> lambda(sigma).

Branches are traced by predictor-corrector continuation on a sigma grid:
linear extrapolation predicts the next root, an expanding window around the
prediction brackets it and the root solver refines it. The inequality checks
on traced curves (decay towards zero, Lipschitz bounds) live here as well.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.config import DEFAULTS, settings
from app.core.exceptions import DomainError, StartingRootMissingError
from app.core.logging import get_logger
from app.data.branch import (
    Branch,
    BranchSample,
    BranchStatus,
    CheckReport,
    CheckStatus,
    DecayReport,
    OrdinalCurve,
    SampledCurve,
)
from app.data.problem import BallProblem, BoundaryKind
from app.services.root_service import RootSolverService
from app.services.spectrum_service import harmonic_multiplicity
from app.utils.retry_policy import BracketPolicy, expand_until_found

logger = get_logger(__name__)


def sigma_grid(
    step: float = DEFAULTS.sigma_step,
    tail: Sequence[float] = DEFAULTS.sigma_tail,
    start: float = 0.0,
) -> List[float]:
    """
    Uniform grid start, start + step, ... below 1, completed by the tail points.

    Grid values are rounded to 12 decimals so that grids built with different
    steps share their common points exactly.
    """
    if not 0.0 < step < 1.0:
        raise DomainError(message="sigma step must lie in (0, 1)", details=f"step = {step!r}")
    count = int(math.ceil((1.0 - start) / step))
    grid = [round(start + k * step, 12) for k in range(count)]
    grid = [sigma for sigma in grid if sigma < 1.0]
    for sigma in tail:
        if sigma > grid[-1] and sigma < 1.0:
            grid.append(sigma)
    return grid


def default_sigma_grid() -> List[float]:
    """0, 0.01, ..., 0.99 and 0.999."""
    return sigma_grid(DEFAULTS.sigma_step, DEFAULTS.sigma_tail)


def figure_sigma_grid(step: float = DEFAULTS.sigma_step) -> List[float]:
    """Open-interval grid step, 2 step, ... below 1 used for the figure dataset."""
    return sigma_grid(step, tail=(), start=step)


def _validate_grid(grid: Sequence[float]) -> None:
    if not grid:
        raise DomainError(message="sigma grid is empty")
    if any(not 0.0 <= sigma < 1.0 for sigma in grid):
        raise DomainError(message="sigma grid must lie in [0, 1)", details=f"grid = {list(grid)!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(message="sigma grid must be strictly increasing")


def _predictions(history: List[Tuple[float, float]], sigma: float) -> List[float]:
    """
    Candidate lambdas at ``sigma``, tried in order.

    Two or more points give the linear extrapolation through the last two.
    A single point gives itself and then the decay-shaped prediction
    lambda * (1 - sigma) / (1 - sigma_last), which is also the fallback for a
    non-positive extrapolation.
    """
    sigma_last, lam_last = history[-1]
    decay_shaped = lam_last * (1.0 - sigma) / (1.0 - sigma_last)
    if len(history) < 2:
        return [lam_last, decay_shaped]
    sigma_prev, lam_prev = history[-2]
    predicted = lam_last + (lam_last - lam_prev) * (sigma - sigma_last) / (sigma_last - sigma_prev)
    return [predicted if predicted > 0.0 else decay_shaped]


class ContinuationService:
    """
    Business rules for branch tracing and for the inequality checks on
    traced curves.
    """

    def __init__(
        self,
        root_service: RootSolverService,
        policy: Optional[BracketPolicy] = None,
        max_workers: int = settings.MAX_WORKERS,
    ):
        """
        Initialize continuation service.

        Args:
            root_service: Service for determinant roots
            policy: Window expansion policy (defaults to 2%, 8%, 32% in z)
            max_workers: Thread pool width for independent branches
        """
        self.root_service = root_service
        self.policy = policy or BracketPolicy()
        self.max_workers = max_workers

    def _map(self, func, items: List) -> List:
        if self.max_workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                return list(pool.map(func, items))
        return [func(item) for item in items]

    def _follow(
        self,
        N: int,
        l: int,
        kind: BoundaryKind,
        start: BranchSample,
        sigmas: Sequence[float],
        lambda_cap: Optional[float],
    ) -> Tuple[List[BranchSample], BranchStatus]:
        """
        Continue a root from ``start`` over ``sigmas`` (either direction).

        Stops at the first sigma where the root is lost or leaves the window
        lambda < lambda_cap.
        """
        samples = [start]
        history = [(start.sigma, start.lam)]
        status = BranchStatus.COMPLETE

        for sigma in sigmas:
            problem = BallProblem(N=N, sigma=sigma, kind=kind)
            candidates = _predictions(history, sigma)
            found = None
            for lam_predicted in candidates:
                z_predicted = lam_predicted ** 0.25
                found = expand_until_found(
                    lambda width: self.root_service.nearest_root(problem, l, z_predicted, width),
                    self.policy,
                )
                if found is not None:
                    break
            if found is None:
                logger.warning(
                    "Branch N=%s l=%s lost at sigma=%.6g near lambda=%.6g", N, l, sigma, lam_predicted
                )
                status = BranchStatus.LOST
                break

            refinement, seen = found
            lam = refinement.z ** 4
            if lambda_cap is not None and lam >= lambda_cap:
                logger.debug("Branch N=%s l=%s left the window at sigma=%.6g", N, l, sigma)
                status = BranchStatus.EXITED_WINDOW
                break
            if seen > 1 and status is BranchStatus.COMPLETE:
                logger.info(
                    "Window at sigma=%.6g for N=%s l=%s held %d roots; kept the nearest",
                    sigma, N, l, seen,
                )
                status = BranchStatus.MERGED_WINDOW

            samples.append(BranchSample(sigma=sigma, lam=lam, residual=refinement.residual))
            history.append((sigma, lam))

        return samples, status

    def starting_roots(
        self,
        N: int,
        l: int,
        sigma: float,
        lambda_max: float,
        kind: BoundaryKind = BoundaryKind.NEUMANN,
        z_step: float = DEFAULTS.z_step,
    ) -> List[BranchSample]:
        """Roots of family (N, l) at ``sigma`` below ``lambda_max`` as branch samples."""
        problem = BallProblem(N=N, sigma=sigma, kind=kind)
        return [
            BranchSample(sigma=sigma, lam=root.lam, residual=root.residual)
            for root in self.root_service.scan_roots(problem, l, lambda_max, z_step)
        ]

    def trace_branch(
        self,
        N: int,
        l: int,
        branch_ordinal: int,
        sigma_grid: Sequence[float],
        kind: BoundaryKind = BoundaryKind.NEUMANN,
        lambda_max: float = DEFAULTS.lambda_max,
        lambda_cap: Optional[float] = None,
        z_step: float = DEFAULTS.z_step,
    ) -> Branch:
        """
        Trace one branch over an increasing sigma grid.

        Args:
            N: Dimension
            l: Angular index
            branch_ordinal: Position of the starting root in family (N, l) at sigma_grid[0]
            sigma_grid: Strictly increasing sigmas in [0, 1)
            kind: Determinant to follow
            lambda_max: Window searched for the starting root
            lambda_cap: Optional upper edge of the tracing window
            z_step: Scan step for the starting root

        Returns:
            Branch with one sample per traced sigma

        Raises:
            DomainError: On an invalid grid or ordinal
            StartingRootMissingError: If fewer than ``branch_ordinal`` roots lie
                below ``lambda_max`` at the first sigma
        """
        _validate_grid(sigma_grid)
        if branch_ordinal < 1:
            raise DomainError(message="branch ordinal must be >= 1", details=f"branch_ordinal = {branch_ordinal}")

        roots = self.starting_roots(N, l, sigma_grid[0], lambda_max, kind, z_step)
        if len(roots) < branch_ordinal:
            raise StartingRootMissingError(
                details=f"N={N} l={l} sigma={sigma_grid[0]:g}: {len(roots)} root(s) below "
                f"lambda={lambda_max:g}, branch {branch_ordinal} requested"
            )
        return self._trace_from(N, l, branch_ordinal, roots[branch_ordinal - 1], sigma_grid, kind, lambda_cap)

    def _trace_from(
        self,
        N: int,
        l: int,
        branch_ordinal: int,
        start: BranchSample,
        sigma_grid: Sequence[float],
        kind: BoundaryKind,
        lambda_cap: Optional[float],
    ) -> Branch:
        samples, status = self._follow(N, l, kind, start, list(sigma_grid[1:]), lambda_cap)
        branch = Branch(N=N, l=l, branch_ordinal=branch_ordinal, kind=kind, samples=samples, status=status)
        logger.debug(
            "Traced N=%s l=%s branch %s: %d sample(s), status %s",
            N, l, branch_ordinal, len(samples), status.value,
        )
        return branch

    def _trace_backward(
        self,
        N: int,
        l: int,
        branch_ordinal: int,
        start: BranchSample,
        sigma_grid: Sequence[float],
        lambda_cap: float,
    ) -> Branch:
        """Trace a root found at the last grid sigma towards smaller sigma until it leaves the window."""
        earlier = [sigma for sigma in reversed(sigma_grid) if sigma < start.sigma]
        samples, status = self._follow(N, l, BoundaryKind.NEUMANN, start, earlier, lambda_cap)
        return Branch(
            N=N, l=l, branch_ordinal=branch_ordinal, kind=BoundaryKind.NEUMANN,
            samples=list(reversed(samples)), status=status,
        )

    def trace_families(
        self,
        N: int,
        l_max: int,
        sigma_grid: Sequence[float],
        lambda_max: float,
        lambda_cap: Optional[float] = None,
        z_step: float = DEFAULTS.z_step,
    ) -> List[Branch]:
        """
        Trace forward every Neumann root below ``lambda_max`` at sigma_grid[0], for l <= l_max.

        Returns:
            Branches sorted by (l, branch ordinal)
        """
        _validate_grid(sigma_grid)
        grid = list(sigma_grid)
        families = list(range(l_max + 1))
        first = self._map(lambda l: self.starting_roots(N, l, grid[0], lambda_max, z_step=z_step), families)
        jobs = [
            (l, ordinal, start)
            for l, roots in zip(families, first)
            for ordinal, start in enumerate(roots, start=1)
        ]
        branches = self._map(
            lambda job: self._trace_from(N, job[0], job[1], job[2], grid, BoundaryKind.NEUMANN, lambda_cap),
            jobs,
        )
        return sorted(branches, key=lambda branch: (branch.l, branch.branch_ordinal))

    def figure1_dataset(
        self,
        N: int = DEFAULTS.dimension,
        lambda_cap: float = DEFAULTS.figure_lambda_cap,
        l_max: int = DEFAULTS.figure_l_max,
        sigma_grid: Optional[Sequence[float]] = None,
        z_step: float = DEFAULTS.z_step,
    ) -> List[Branch]:
        """
        Every Neumann branch inside the window lambda < lambda_cap.

        Branches present at the first grid sigma are traced forward. Roots
        present at the last grid sigma that no forward branch reaches entered
        the window from above; they are traced backward and numbered after
        the forward branches of their family.

        Returns:
            Branches sorted by (l, branch ordinal)
        """
        grid = list(sigma_grid) if sigma_grid is not None else figure_sigma_grid()
        _validate_grid(grid)
        if lambda_cap <= 0.0:
            raise DomainError(message="lambda cap must be positive", details=f"lambda_cap = {lambda_cap!r}")
        families = list(range(l_max + 1))
        forward = self.trace_families(N, l_max, grid, lambda_cap, lambda_cap, z_step)

        backward: List[Branch] = []
        if len(grid) > 1:
            last = self._map(lambda l: self.starting_roots(N, l, grid[-1], lambda_cap, z_step=z_step), families)
            backward_jobs = []
            for l, roots in zip(families, last):
                reached = [
                    branch.value_at(grid[-1]) for branch in forward if branch.l == l
                ]
                reached = [lam for lam in reached if lam is not None]
                ordinal = sum(1 for branch in forward if branch.l == l)
                for start in roots:
                    if any(abs(start.lam - lam) <= 1e-6 * lam for lam in reached):
                        continue
                    ordinal += 1
                    backward_jobs.append((l, ordinal, start))
            backward = self._map(
                lambda job: self._trace_backward(N, job[0], job[1], job[2], grid, lambda_cap),
                backward_jobs,
            )

        branches = sorted(forward + backward, key=lambda branch: (branch.l, branch.branch_ordinal))
        logger.info(
            "Figure dataset N=%s: %d forward and %d entering branch(es) below lambda=%g",
            N, len(forward), len(backward), lambda_cap,
        )
        return branches

    @staticmethod
    def ordinal_curves(
        branches: Iterable[Branch],
        N: int,
        sigma_grid: Sequence[float],
        lambda_cap: float,
        l_max: Optional[int] = None,
    ) -> List[OrdinalCurve]:
        """
        Fixed-ordinal curves sigma -> lambda_j(sigma) for the positive ordinals.

        At each sigma the branch values are expanded by their multiplicities,
        sorted and numbered after the N + 1 zero modes. An ordinal is kept only
        below the window cap and below the lowest root of family ``l_max``,
        where the branch set is known to be complete.
        """
        branches = list(branches)
        if l_max is None:
            l_max = max((branch.l for branch in branches), default=0)

        by_ordinal: Dict[int, List[BranchSample]] = {}
        for sigma in sigma_grid:
            ceiling = lambda_cap
            values: List[float] = []
            for branch in branches:
                lam = branch.value_at(sigma)
                if lam is None:
                    continue
                if branch.l == l_max:
                    ceiling = min(ceiling, lam)
                values.extend([lam] * harmonic_multiplicity(N, branch.l))
            values.sort()
            for index, lam in enumerate(values):
                if lam >= ceiling:
                    break
                ordinal = N + 2 + index
                by_ordinal.setdefault(ordinal, []).append(BranchSample(sigma=sigma, lam=lam, residual=0.0))

        return [
            OrdinalCurve(N=N, ordinal=ordinal, samples=samples)
            for ordinal, samples in sorted(by_ordinal.items())
        ]

    @staticmethod
    def check_decay(
        curve: SampledCurve,
        factor: float = DEFAULTS.decay_factor,
        reference_sigma: float = DEFAULTS.decay_reference_sigma,
        min_sigma: float = DEFAULTS.decay_min_sigma,
    ) -> DecayReport:
        """
        Boundedness of lambda(sigma) / (1 - sigma) as sigma -> 1.

        PASS iff every ratio at sigma >= reference_sigma stays within
        ``factor`` times the ratio at reference_sigma. Incomplete branches and
        curves that stop before ``min_sigma`` are inconclusive.
        """
        check = f"decay {curve.label}"
        incomplete = isinstance(curve, Branch) and curve.status in (BranchStatus.LOST, BranchStatus.EXITED_WINDOW)
        if incomplete or not curve.samples or curve.sigmas[-1] < min_sigma:
            return DecayReport(check=check, status=CheckStatus.INCONCLUSIVE, location=curve.label)

        ratios = [(sample.sigma, sample.lam / (1.0 - sample.sigma)) for sample in curve.samples]
        tail = [(sigma, ratio) for sigma, ratio in ratios if sigma >= reference_sigma - 1e-12]
        reference = tail[0][1] if tail else None
        sup_ratio = max(ratio for _, ratio in ratios)
        tail_ratio = ratios[-1][1]
        if reference is None or reference <= 0.0:
            return DecayReport(
                check=check, status=CheckStatus.INCONCLUSIVE, location=curve.label,
                sup_ratio=sup_ratio, tail_ratio=tail_ratio,
            )

        worst_sigma, worst = max(tail, key=lambda item: item[1])
        worst_ratio = worst / (factor * reference)
        return DecayReport(
            check=check,
            status=CheckStatus.PASS if worst_ratio <= 1.0 else CheckStatus.FAIL,
            worst_ratio=worst_ratio,
            location=f"{curve.label} sigma={worst_sigma:g}",
            sup_ratio=sup_ratio,
            tail_ratio=tail_ratio,
        )

    @staticmethod
    def check_constant_bound(curve: OrdinalCurve, constant: float) -> CheckReport:
        """lambda_j(sigma) <= C_j (1 - sigma) at every sample of an ordinal curve."""
        check = f"decay_constant {curve.label}"
        worst_ratio = 0.0
        location = None
        for sample in curve.samples:
            allowed = constant * (1.0 - sample.sigma)
            ratio = sample.lam / allowed if allowed > 0.0 else math.inf
            if ratio > worst_ratio:
                worst_ratio, location = ratio, f"{curve.label} sigma={sample.sigma:g}"
        status = CheckStatus.PASS if worst_ratio <= 1.0 + DEFAULTS.lipschitz_slack else CheckStatus.FAIL
        return CheckReport(check=check, status=status, worst_ratio=worst_ratio, location=location)

    @staticmethod
    def check_lipschitz(curve: SampledCurve, slack: float = DEFAULTS.lipschitz_slack) -> CheckReport:
        """
        Lipschitz bounds on adjacent sample pairs.

        For sigma_1 < sigma_2 with (1 + N)(sigma_2 - sigma_1) < 1 - sigma_1:
            |lambda_2 - lambda_1| <= (1 + N) lambda_1 / (1 - sigma_1) (sigma_2 - sigma_1)
        For every pair with both sigmas in (1/2, 1), whatever the spacing, the
        same bound holds without the factor (1 + N). ``worst_ratio`` is the
        largest left/right quotient.
        """
        check = f"lipschitz {curve.label}"
        if len(curve.samples) < 2:
            return CheckReport(check=check, status=CheckStatus.SKIPPED, location=curve.label)

        N = curve.N
        worst_ratio = 0.0
        location = None
        for first, second in zip(curve.samples, curve.samples[1:]):
            gap = second.sigma - first.sigma
            refined = first.lam / (1.0 - first.sigma) * gap
            bounds = []
            if (1 + N) * gap < 1.0 - first.sigma:
                bounds.append((1 + N) * refined)
            if first.sigma > 0.5 and second.sigma < 1.0:
                bounds.append(refined)
            if not bounds:
                continue
            change = abs(second.lam - first.lam)
            for bound in bounds:
                ratio = change / bound if bound > 0.0 else (0.0 if change == 0.0 else math.inf)
                if ratio > worst_ratio:
                    worst_ratio = ratio
                    location = f"{curve.label} sigma=[{first.sigma:g}, {second.sigma:g}]"

        status = CheckStatus.PASS if worst_ratio <= 1.0 + slack else CheckStatus.FAIL
        return CheckReport(check=check, status=status, worst_ratio=worst_ratio, location=location)
