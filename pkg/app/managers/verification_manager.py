"""
Manager for the verification suite.

Runs every identity, oracle and inequality check at a given dimension and
collects one report per check. A check that raises a solver exception is
reported as inconclusive with the error as its location.
"""
import math
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from app.core.config import DEFAULTS
from app.core.exceptions import BaseSolverException, InsufficientWindowError
from app.core.logging import get_logger
from app.data.branch import (
    Branch,
    CheckReport,
    CheckStatus,
    OrdinalCurve,
    VerificationReport,
)
from app.data.problem import BallProblem, BoundaryKind
from app.data.ritz import TrialBasis
from app.data.verification import VerificationPlan
from app.repositories.ball_determinant_repository import BallDeterminantRepository, det2
from app.services.continuation_service import ContinuationService, figure_sigma_grid, sigma_grid
from app.services.ritz_service import RitzService
from app.services.root_service import RootSolverService
from app.services.spectrum_service import SpectrumService
from app.utils.special_fn import bessel_cross_products

logger = get_logger(__name__)

CROSS_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_SEVERITY = {
    CheckStatus.SKIPPED: 0,
    CheckStatus.PASS: 1,
    CheckStatus.WARN: 2,
    CheckStatus.INCONCLUSIVE: 3,
    CheckStatus.FAIL: 4,
}


class _Worst:
    """Running maximum of measured/allowed ratios with the place it was met."""

    def __init__(self):
        self.ratio = 0.0
        self.location: Optional[str] = None

    def update(self, ratio: float, location: str) -> None:
        if ratio > self.ratio:
            self.ratio = ratio
            self.location = location

    def report(self, check: str, limit: float = 1.0) -> CheckReport:
        status = CheckStatus.PASS if self.ratio <= limit else CheckStatus.FAIL
        return CheckReport(check=check, status=status, worst_ratio=self.ratio, location=self.location)


def _ratio(difference: float, allowed: float) -> float:
    if allowed > 0.0:
        return difference / allowed
    return 0.0 if difference == 0.0 else math.inf


def combine_reports(check: str, reports: Iterable[CheckReport]) -> CheckReport:
    """
    Fold per-curve reports into one.

    The status is the most severe one met; worst_ratio and location come from
    the report with the largest ratio.
    """
    reports = list(reports)
    if not reports:
        return CheckReport(check=check, status=CheckStatus.INCONCLUSIVE, location="nothing to check")

    status = max((report.status for report in reports), key=lambda item: _SEVERITY[item])
    rated = [report for report in reports if report.worst_ratio is not None]
    worst = max(rated, key=lambda report: report.worst_ratio) if rated else None
    location = worst.location if worst else None
    if status in (CheckStatus.FAIL, CheckStatus.INCONCLUSIVE):
        offending = next(report for report in reports if report.status is status)
        location = offending.location or offending.check
    return CheckReport(
        check=check,
        status=status,
        worst_ratio=worst.worst_ratio if worst else None,
        location=location,
    )


class VerificationManager:
    """
    Orchestrator for ``verify``.

    Checks that exist only for N = 2 (Rayleigh-Ritz oracle, explicit decay
    constants, figure dataset) report ``skipped`` at other dimensions.
    """

    def __init__(
        self,
        determinant_repository: BallDeterminantRepository,
        root_service: RootSolverService,
        spectrum_service: SpectrumService,
        continuation_service: ContinuationService,
        ritz_service: RitzService,
        plan: Optional[VerificationPlan] = None,
    ):
        """
        Initialize verification manager.

        Args:
            determinant_repository: Repository for boundary determinants
            root_service: Service for determinant roots
            spectrum_service: Service for ordered spectra
            continuation_service: Service for branches in sigma
            ritz_service: Rayleigh-Ritz oracle
            plan: Grids and thresholds of the checks
        """
        self.determinant_repository = determinant_repository
        self.root_service = root_service
        self.spectrum_service = spectrum_service
        self.continuation_service = continuation_service
        self.ritz_service = ritz_service
        self.plan = plan or VerificationPlan()
        self._decay_cache: Dict[Tuple[int, float], Tuple[List[Branch], List[OrdinalCurve]]] = {}

    def checks(self) -> List[Tuple[str, Callable[[int, float], CheckReport]]]:
        return [
            ("bessel_identities", self.check_bessel_identities),
            ("f_short_collapse", self.check_f_short_collapse),
            ("f_long", self.check_f_long),
            ("dirichlet_coincidence", self.check_dirichlet_coincidence),
            ("zero_modes", self.check_zero_modes),
            ("decay", self.check_decay),
            ("decay_constant", self.check_decay_constant),
            ("lipschitz", self.check_lipschitz),
            ("ritz_sandwich", self.check_ritz_sandwich),
            ("ritz_kernel", self.check_ritz_kernel),
            ("figure1", self.check_figure1),
            ("grid_independence", self.check_grid_independence),
        ]

    def run(self, N: int, z_step: float, only: Optional[Iterable[str]] = None) -> VerificationReport:
        """
        Run the suite at dimension N.

        Args:
            N: Dimension of the checks that depend on it
            z_step: Scan step for every root scan
            only: Optional subset of check names

        Returns:
            VerificationReport with one report per check, in suite order
        """
        selected = set(only) if only is not None else None
        reports: List[CheckReport] = []
        for name, check in self.checks():
            if selected is not None and name not in selected:
                continue
            logger.info("Running check %s (N=%s)", name, N)
            try:
                report = check(N, z_step)
            except BaseSolverException as exc:
                logger.warning("Check %s could not complete: %s", name, exc)
                report = CheckReport(check=name, status=CheckStatus.INCONCLUSIVE, location=exc.error.one_line())
            logger.info("Check %s: %s", name, report.status.value)
            reports.append(report)
        return VerificationReport(N=N, reports=reports)

    # Identities

    def check_bessel_identities(self, N: int, z_step: float) -> CheckReport:
        """
        Closed forms of the six cross products against the derivative bundle,
        relative to the closed-form value.
        """
        plan = self.plan
        worst = _Worst()
        for dim in sorted(set(plan.identity_dimensions) | {N}):
            for l in range(plan.identity_l_max + 1):
                for z in plan.identity_z:
                    bundle = self.determinant_repository.bundle(dim, l, z)
                    closed = bessel_cross_products(dim, l, z)
                    for pair in CROSS_PAIRS:
                        difference = abs(bundle.cross(*pair) - closed[pair])
                        size = abs(closed[pair])
                        if size <= plan.identity_floor * bundle.cross_scale(*pair):
                            size = bundle.cross_scale(*pair)
                        worst.update(
                            _ratio(difference, plan.identity_rtol * size),
                            f"N={dim} l={l} z={z:g} [{pair[0]},{pair[1]}]",
                        )
        return worst.report("bessel_identities")

    def _collapse_grid(self, points: Optional[int] = None) -> np.ndarray:
        low, high = self.plan.collapse_lambda_range
        return np.geomspace(low, high, points or self.plan.collapse_points)

    def check_f_short_collapse(self, N: int, z_step: float) -> CheckReport:
        """
        det M(lambda, 1) from the matrix against its collapsed form on a log grid
        in lambda; the error is relative to the collapsed value unless that
        value is below ``collapse_floor``.
        """
        plan = self.plan
        repository = self.determinant_repository
        worst = _Worst()
        for dim in sorted(set(plan.collapse_dimensions) | {N}):
            for l in range(plan.collapse_l_max + 1):
                for lam in map(float, self._collapse_grid()):
                    determinant = det2(repository.neumann_matrix(dim, l, lam, 1.0))
                    collapsed = repository.f_short(dim, l, lam)
                    if abs(collapsed) > plan.collapse_floor:
                        scale = abs(collapsed)
                    else:
                        scale = repository.neumann_det_scale(dim, l, repository.to_z(lam), 1.0)
                    worst.update(
                        _ratio(abs(determinant - collapsed), plan.collapse_rtol * scale),
                        f"N={dim} l={l} lambda={lam:.6g}",
                    )
        return worst.report("f_short_collapse")

    def check_f_long(self, N: int, z_step: float) -> CheckReport:
        """Six-term expansion against the collapsed form, from the bundle and from the closed forms."""
        plan = self.plan
        repository = self.determinant_repository
        worst = _Worst()
        grid = self._collapse_grid(20)
        for dim in sorted(set(plan.collapse_dimensions) | {N}):
            for l in range(plan.collapse_l_max + 1):
                for lam in map(float, grid):
                    scale = plan.collapse_rtol * repository.f_long_scale(dim, l, lam)
                    expanded = repository.f_long(dim, l, lam)
                    closed = repository.f_long(dim, l, lam, use_identities=True)
                    collapsed = repository.f_short(dim, l, lam)
                    location = f"N={dim} l={l} lambda={lam:.6g}"
                    worst.update(_ratio(abs(expanded - collapsed), scale), location)
                    worst.update(_ratio(abs(closed - expanded), scale), location)
        return worst.report("f_long")

    # Spectra

    def check_dirichlet_coincidence(self, N: int, z_step: float) -> CheckReport:
        """
        Positive sigma = 1 free-plate roots equal the clamped roots, family by
        family and in the merged spectrum.
        """
        plan = self.plan
        worst = _Worst()
        lambda_max = plan.coincidence_z_max ** 4
        for dim in sorted(set(plan.coincidence_dimensions) | {N}):
            clamped = BallProblem(N=dim, kind=BoundaryKind.DIRICHLET)
            degenerate = BallProblem(N=dim, sigma=1.0, kind=BoundaryKind.NEUMANN)
            clamped_roots = {}
            degenerate_roots = {}
            for l in range(plan.coincidence_l_max + 1):
                clamped_roots[l] = self.root_service.scan_roots(clamped, l, lambda_max, z_step)
                degenerate_roots[l] = self.root_service.scan_roots(degenerate, l, lambda_max, z_step)
                first = clamped_roots[l][: plan.coincidence_roots]
                second = degenerate_roots[l][: plan.coincidence_roots]
                location = f"N={dim} l={l}"
                if len(first) != len(second):
                    worst.update(math.inf, f"{location}: {len(first)} vs {len(second)} roots")
                    continue
                for k, (mu, lam) in enumerate(zip(first, second), start=1):
                    worst.update(
                        _ratio(abs(mu.lam - lam.lam), plan.coincidence_rtol * mu.lam),
                        f"{location} root {k}",
                    )

            count = plan.coincidence_roots
            clamped_values = self.spectrum_service.merge(clamped, clamped_roots, count).values()
            degenerate_values = self.spectrum_service.merge(degenerate, degenerate_roots, count).values()
            if len(clamped_values) != len(degenerate_values):
                worst.update(math.inf, f"N={dim} spectrum: ordinal counts differ")
                continue
            for j, (mu, lam) in enumerate(zip(clamped_values, degenerate_values), start=1):
                worst.update(
                    _ratio(abs(mu - lam), plan.coincidence_rtol * mu), f"N={dim} spectrum j={j}"
                )
        return worst.report("dirichlet_coincidence")

    def check_zero_modes(self, N: int, z_step: float) -> CheckReport:
        """The free-plate spectrum for sigma < 1 starts with exactly N + 1 zeros."""
        plan = self.plan
        worst = _Worst()
        for dim in sorted(set(plan.zero_mode_dimensions) | {N}):
            for sigma in plan.zero_mode_sigmas:
                problem = BallProblem(N=dim, sigma=sigma, kind=BoundaryKind.NEUMANN)
                spectrum = self.spectrum_service.assemble_spectrum(
                    problem, plan.zero_mode_lambda_max, plan.zero_mode_l_max, dim + 2, z_step
                )
                values = spectrum.values()
                zeros = sum(1 for value in values if value == 0.0)
                if zeros != dim + 1 or not values[dim + 1] > 0.0:
                    worst.update(math.inf, f"N={dim} sigma={sigma:g}: {zeros} zero(s)")
        return worst.report("zero_modes")

    # Continuation

    def _decay_dataset(self, N: int, z_step: float) -> Tuple[List[Branch], List[OrdinalCurve]]:
        key = (N, z_step)
        if key not in self._decay_cache:
            plan = self.plan
            grid = sigma_grid(plan.decay_sigma_step)
            branches = self.continuation_service.figure1_dataset(
                N=N, lambda_cap=plan.decay_lambda_cap, l_max=plan.decay_l_max,
                sigma_grid=grid, z_step=z_step,
            )
            curves = self.continuation_service.ordinal_curves(
                branches, N, grid, plan.decay_lambda_cap, plan.decay_l_max
            )
            last = N + 1 + plan.decay_ordinals
            self._decay_cache[key] = (branches, [curve for curve in curves if curve.ordinal <= last])
        return self._decay_cache[key]

    def _first_dirichlet(self, N: int, z_step: float) -> float:
        """Lowest clamped eigenvalue; the scan window doubles in z until it holds a root."""
        problem = BallProblem(N=N, kind=BoundaryKind.DIRICHLET)
        z_hi = DEFAULTS.lambda_max ** 0.25
        while True:
            roots = self.root_service.scan_roots(problem, 0, z_hi ** 4, z_step)
            if roots:
                return roots[0].lam
            if z_hi >= DEFAULTS.z_max:
                raise InsufficientWindowError(details=f"no clamped root below z={DEFAULTS.z_max:g} at N={N}")
            z_hi = min(2.0 * z_hi, DEFAULTS.z_max)

    def check_decay(self, N: int, z_step: float) -> CheckReport:
        """
        lambda / (1 - sigma) stays bounded on the first positive ordinals and on
        the lowest branch of every family l >= 2; no ordinal approaches a
        positive clamped eigenvalue.
        """
        plan = self.plan
        branches, curves = self._decay_dataset(N, z_step)
        service = self.continuation_service
        expected = plan.decay_ordinals
        if len(curves) < expected:
            return CheckReport(
                check="decay", status=CheckStatus.INCONCLUSIVE,
                location=f"{len(curves)} of {expected} ordinal curves inside the window",
            )

        reports: List[CheckReport] = [service.check_decay(curve) for curve in curves]
        lowest = [
            branch for branch in branches
            if branch.l >= 2 and branch.branch_ordinal == 1 and branch.sigmas[0] == 0.0
        ]
        reports.extend(service.check_decay(branch) for branch in lowest)

        limit = plan.dirichlet_fraction * self._first_dirichlet(N, z_step)
        for curve in curves:
            tail = curve.samples[-1]
            status = CheckStatus.PASS if tail.lam < limit else CheckStatus.FAIL
            reports.append(CheckReport(
                check=f"dirichlet_limit {curve.label}", status=status,
                worst_ratio=tail.lam / limit, location=f"{curve.label} sigma={tail.sigma:g}",
            ))
        return combine_reports("decay", reports)

    def check_decay_constant(self, N: int, z_step: float) -> CheckReport:
        """lambda_j(sigma) <= C_j (1 - sigma) with the explicit harmonic-trial constants."""
        if N != 2:
            return CheckReport(check="decay_constant", status=CheckStatus.SKIPPED, location=f"N={N}")
        _, curves = self._decay_dataset(N, z_step)
        service = self.continuation_service
        reports = [
            service.check_constant_bound(curve, self.ritz_service.est_conv_constant(curve.ordinal))
            for curve in curves
        ]
        return combine_reports("decay_constant", reports)

    def check_lipschitz(self, N: int, z_step: float) -> CheckReport:
        """Lipschitz bounds on every traced branch and on every ordinal curve."""
        branches, curves = self._decay_dataset(N, z_step)
        service = self.continuation_service
        reports = [service.check_lipschitz(curve) for curve in [*branches, *curves]]
        return combine_reports("lipschitz", reports)

    # Rayleigh-Ritz oracle

    def check_ritz_sandwich(self, N: int, z_step: float) -> CheckReport:
        """
        Ritz values bound the determinant eigenvalues from above, decrease as the
        basis grows and come within the gap threshold on the richest basis.
        """
        if N != 2:
            return CheckReport(check="ritz_sandwich", status=CheckStatus.SKIPPED, location=f"N={N}")
        plan = self.plan
        worst = _Worst()
        for sigma in plan.ritz_sigmas:
            problem = BallProblem(N=2, sigma=sigma, kind=BoundaryKind.NEUMANN)
            truth = self.spectrum_service.assemble_spectrum(
                problem, plan.ritz_lambda_max, plan.ritz_l_max, plan.ritz_count, z_step
            ).values()
            rows = self.ritz_service.bounds_for_bases(
                sigma, plan.ritz_count, list(plan.ritz_m_values), plan.ritz_l_max
            )
            for m_max, bounds in zip(plan.ritz_m_values, rows):
                for j, (lam, bound) in enumerate(zip(truth, bounds), start=1):
                    worst.update(
                        _ratio(max(lam - bound, 0.0), plan.ritz_rtol * max(lam, 1.0)),
                        f"sigma={sigma:g} m_max={m_max} j={j}: bound below eigenvalue",
                    )
            for (m_coarse, coarse), fine in zip(zip(plan.ritz_m_values, rows), rows[1:]):
                for j, (before, after) in enumerate(zip(coarse, fine), start=1):
                    worst.update(
                        _ratio(max(after - before, 0.0), plan.ritz_rtol * max(before, 1.0)),
                        f"sigma={sigma:g} m_max>{m_coarse} j={j}: bound increased",
                    )
            for j, (lam, bound) in enumerate(zip(truth, rows[-1]), start=1):
                if j > plan.ritz_gap_ordinals or lam == 0.0:
                    continue
                worst.update(
                    _ratio((bound - lam) / lam, plan.ritz_gap),
                    f"sigma={sigma:g} j={j}: relative gap",
                )
        return worst.report("ritz_sandwich")

    def check_ritz_kernel(self, N: int, z_step: float) -> CheckReport:
        """
        Exactly three Ritz values vanish, harmonic trials reproduce the
        j (1 - sigma) max energy ceiling and A(sigma) is affine in sigma.
        """
        if N != 2:
            return CheckReport(check="ritz_kernel", status=CheckStatus.SKIPPED, location=f"N={N}")
        plan = self.plan
        worst = _Worst()
        basis = TrialBasis.full(plan.ritz_l_max, max(plan.ritz_m_values))
        for sigma in plan.ritz_sigmas:
            kernel = self.ritz_service.kernel_dimension(basis, sigma)
            if kernel != N + 1:
                worst.update(math.inf, f"sigma={sigma:g}: kernel dimension {kernel}")
            bounds = self.ritz_service.harmonic_bounds(sigma, plan.ritz_count)
            for j, bound in enumerate(bounds, start=1):
                ceiling = self.ritz_service.est_conv_constant(j) * (1.0 - sigma)
                worst.update(
                    _ratio(max(bound - ceiling, 0.0), plan.ritz_rtol * max(ceiling, 1.0)),
                    f"sigma={sigma:g} j={j}: harmonic bound above ceiling",
                )

        matrices = self.ritz_service.ritz_repository.assemble(basis)
        if not np.array_equal(matrices.stiffness(0.25), 0.75 * matrices.hessian + 0.25 * matrices.laplacian):
            worst.update(math.inf, "A(0.25) differs from 0.75 A_H + 0.25 A_Delta")
        return worst.report("ritz_kernel")

    # Figure dataset

    def check_figure1(self, N: int, z_step: float) -> CheckReport:
        """
        Figure dataset: every family present, emitted values inside the window,
        starting counts equal to an independent finer scan. Branches that end
        higher at the last check sigma than at the first are reported as a warning.
        """
        if N != 2:
            return CheckReport(check="figure1", status=CheckStatus.SKIPPED, location=f"N={N}")
        plan = self.plan
        grid = figure_sigma_grid(plan.figure_sigma_step)
        branches = self.continuation_service.figure1_dataset(
            N=N, lambda_cap=plan.figure_lambda_cap, l_max=plan.figure_l_max,
            sigma_grid=grid, z_step=z_step,
        )
        worst = _Worst()
        for l in range(plan.figure_l_max + 1):
            family = [branch for branch in branches if branch.l == l]
            if not family:
                worst.update(math.inf, f"l={l}: no branch in the window")
            for branch in family:
                if any(not 0.0 < lam < plan.figure_lambda_cap for lam in branch.lambdas):
                    worst.update(math.inf, f"{branch.label}: value outside the window")
            started = sum(1 for branch in family if branch.sigmas[0] == grid[0])
            problem = BallProblem(N=N, sigma=grid[0], kind=BoundaryKind.NEUMANN)
            oracle = self.root_service.scan_roots(problem, l, plan.figure_lambda_cap, z_step / 2.0)
            if started != len(oracle):
                worst.update(math.inf, f"l={l}: {started} branch(es) vs {len(oracle)} root(s)")
        report = worst.report("figure1")
        if report.status is not CheckStatus.PASS:
            return report

        low, high = plan.figure_check_sigmas
        rising = []
        for branch in branches:
            before, after = branch.value_at(low), branch.value_at(high)
            if before is not None and after is not None and not after < before:
                rising.append(branch.label)
        if rising:
            logger.warning("Branches not lower at sigma=%g than at sigma=%g: %s", high, low, "; ".join(rising))
            return CheckReport(
                check="figure1", status=CheckStatus.WARN,
                worst_ratio=report.worst_ratio, location="; ".join(rising),
            )
        return report

    # Numerics

    def check_grid_independence(self, N: int, z_step: float) -> CheckReport:
        """Halving the scan step changes no root count and no root beyond the tolerance."""
        plan = self.plan
        worst = _Worst()
        problems = [BallProblem(N=N, kind=BoundaryKind.DIRICHLET)] + [
            BallProblem(N=N, sigma=sigma, kind=BoundaryKind.NEUMANN) for sigma in plan.grid_sigmas
        ]
        for problem in problems:
            for l in range(plan.grid_l_max + 1):
                coarse = self.root_service.scan_roots(problem, l, plan.grid_lambda_max, z_step)
                fine = self.root_service.scan_roots(problem, l, plan.grid_lambda_max, z_step / 2.0)
                location = f"{problem.kind.value} sigma={problem.sigma_label} l={l}"
                if len(coarse) != len(fine):
                    worst.update(math.inf, f"{location}: {len(coarse)} vs {len(fine)} roots")
                    continue
                for k, (a, b) in enumerate(zip(coarse, fine), start=1):
                    worst.update(_ratio(abs(a.lam - b.lam), plan.grid_rtol * a.lam), f"{location} root {k}")
        return worst.report("grid_independence")
