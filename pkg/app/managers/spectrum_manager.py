"""
Manager for spectrum and branch orchestration.

Coordinates the table-producing subcommands between the command layer and
the spectrum and continuation services.
"""
from typing import List, Tuple

from app.core.config import DEFAULTS
from app.core.logging import get_logger
from app.data.branch import Branch, CheckReport
from app.data.problem import BallProblem, BoundaryKind
from app.data.run_config import RunConfig
from app.data.spectrum import Spectrum
from app.services.continuation_service import ContinuationService, default_sigma_grid, figure_sigma_grid
from app.services.spectrum_service import SpectrumService

logger = get_logger(__name__)


class SpectrumManager:
    """
    Orchestrator for the dirichlet, neumann, branches and figure1 subcommands.
    """

    def __init__(self, spectrum_service: SpectrumService, continuation_service: ContinuationService):
        """
        Initialize spectrum manager.

        Args:
            spectrum_service: Service for ordered spectra
            continuation_service: Service for branches in sigma
        """
        self.spectrum_service = spectrum_service
        self.continuation_service = continuation_service

    def dirichlet_table(self, config: RunConfig) -> Spectrum:
        """
        Ordered clamped-plate spectrum mu_1 <= mu_2 <= ...

        Args:
            config: Validated run configuration

        Returns:
            Spectrum truncated to ``config.count`` ordinals
        """
        logger.info("Computing Dirichlet spectrum N=%s count=%s", config.N, config.count)
        problem = BallProblem(N=config.N, kind=BoundaryKind.DIRICHLET)
        return self.spectrum_service.assemble_spectrum(
            problem, config.lambda_max, config.l_max, config.count, config.z_step
        )

    def neumann_table(self, config: RunConfig) -> Spectrum:
        """
        Ordered free-plate spectrum at ``config.sigma``, zero modes included.

        Args:
            config: Validated run configuration

        Returns:
            Spectrum truncated to ``config.count`` ordinals
        """
        logger.info(
            "Computing Neumann spectrum N=%s sigma=%s count=%s", config.N, config.sigma, config.count
        )
        problem = BallProblem(N=config.N, sigma=config.sigma, kind=BoundaryKind.NEUMANN)
        return self.spectrum_service.assemble_spectrum(
            problem, config.lambda_max, config.l_max, config.count, config.z_step
        )

    def branches(self, config: RunConfig) -> Tuple[List[Branch], List[CheckReport]]:
        """
        Every branch starting below ``config.lambda_max`` at sigma = 0, traced to 0.999.

        The Lipschitz check runs on every branch; the decay check on the lowest
        branch of every family l >= 2, the only families whose lowest branch
        decays to zero.

        Returns:
            (branches sorted by (l, ordinal), inequality reports)
        """
        grid = default_sigma_grid()
        service = self.continuation_service
        logger.info("Tracing branches N=%s below lambda=%g for l <= %s", config.N, config.lambda_max, config.l_max)

        branches = service.trace_families(
            config.N, config.l_max, grid, config.lambda_max, z_step=config.z_step
        )

        reports: List[CheckReport] = [service.check_lipschitz(branch) for branch in branches]
        reports.extend(
            service.check_decay(branch)
            for branch in branches
            if branch.l >= 2 and branch.branch_ordinal == 1
        )
        return branches, reports

    def figure1(self, config: RunConfig) -> List[Branch]:
        """
        Branches inside the window (0, 1) x (0, lambda_max) for l <= l_max.

        Args:
            config: Validated run configuration; ``lambda_max`` is the window cap

        Returns:
            Branches sorted by (l, ordinal)
        """
        logger.info("Building figure dataset N=%s cap=%g l_max=%s", config.N, config.lambda_max, config.l_max)
        return self.continuation_service.figure1_dataset(
            N=config.N,
            lambda_cap=config.lambda_max,
            l_max=config.l_max,
            sigma_grid=figure_sigma_grid(DEFAULTS.sigma_step),
            z_step=config.z_step,
        )
